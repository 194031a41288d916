"""
Alternating selection toward a common fixed point
=================================================

Starting from x0 the iteration picks a nearest image point, alternating
between the two maps, and stops once the point lies in both images.
"""

from commonfix import AlphaOracle, MetricSpace, SolverConfig, iterate_duality, verify_limit_fixed
from commonfix.maps import halving

###############################################################################
# On the grid 0, 1/64, ..., 1, S halves and T quarters (both rounding down).
grid = MetricSpace.grid(0.0, 1 / 64, 65)
S, T = halving(grid, 2), halving(grid, 4)
alpha = AlphaOracle.constant(0.75)

trace = iterate_duality(grid, S, T, alpha, grid.lookup("1"))
for row in trace.rows(grid):
    print(row["step"], row["point"], row["gap"], row["epsilon"])
print(trace.terminated, "after", trace.steps, "steps")

###############################################################################
# The gaps shrink strictly, and the limit is fixed for both maps.
print("strictly decreasing:", trace.strictly_decreasing())
print("limit fixed:", verify_limit_fixed(grid, S, T, alpha, trace).holds)

###############################################################################
# The randomized slack mode draws among near-nearest points instead.
cfg = SolverConfig(selection_mode="epsilon-slack", seed=1)
slack = iterate_duality(grid, S, T, alpha, grid.lookup("1"), cfg)
print("slack mode:", [grid.label(p) for p in slack.points])
