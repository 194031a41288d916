"""
Hausdorff distance on finite point sets
=======================================

Distances between sets are the backbone of everything else: a multi-valued
map sends a point to a set, and contraction is measured by how far apart
two image sets are.
"""

from commonfix import MetricSpace, hausdorff, point_set_distance, validate_metric

###############################################################################
# A grid of four points 0, 1, 2, 3 on the line.
line = MetricSpace.grid(0.0, 1.0, 4)

# distance from a point to a set: the nearest member counts
print("d(1, {0,2}) =", point_set_distance(line, 1, [0, 2]))
print("d(3, {0,2}) =", point_set_distance(line, 3, [0, 2]))

###############################################################################
# The Hausdorff distance looks at the worst point in either set. Adding the
# point 2 to {0} costs 2 even though 0 is still shared.
print("H({0}, {0,2}) =", hausdorff(line, [0], [0, 2]))
print("H({0,2}, {1}) =", hausdorff(line, [0, 2], [1]))

###############################################################################
# Explicit matrices are validated on construction; here the triangle
# inequality fails because d(0,2) = 5 exceeds 1 + 1.
bad = MetricSpace.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]], validate=False)
print(validate_metric(bad).violation)
