"""
Checking contraction certificates
=================================

Halving on the points 0, 1, 2, 4 looks like a textbook contraction, but
under the plain distance |x - y| the pair (2, 1) lands isometrically on
(1, 0). Placing the same four labels at 0, 1, 3, 7 on the line fixes that.
"""

import numpy as np

from commonfix import (AlphaOracle, CompactlyPositiveGap, Gauge, MetricSpace,
                       check_alpha_duality, check_gauge_conditions, check_phi_duality,
                       check_weakly_contractive)
from commonfix.maps import halving
from commonfix.oracle import minimal_constant_alpha

labels = ["0", "1", "2", "4"]
plain = MetricSpace.from_matrix(np.abs(np.subtract.outer([0, 1, 2, 4], [0, 1, 2, 4])), labels)
spread = MetricSpace.from_matrix(np.abs(np.subtract.outer([0, 1, 3, 7], [0, 1, 3, 7])), labels)

###############################################################################
# The smallest constant factor that certifies halving, found exhaustively.
for name, space in (("|x - y|", plain), ("spread", spread)):
    T = halving(space)
    print(f"{name:>8}: minimal factor {minimal_constant_alpha(space, T, T):g}")

###############################################################################
# On the spread space all three certificate kinds pass with factor 1/2.
T = halving(spread)
print(check_alpha_duality(spread, T, T, AlphaOracle.constant(0.5)).render(spread))
print(check_phi_duality(spread, T, T, Gauge.linear(0.5)).render(spread))
print(check_weakly_contractive(spread, T, CompactlyPositiveGap.linear(spread, 0.5)).render(spread))

###############################################################################
# Gauge conditions can only be sampled. t (1 - exp(-t)) is harmless near 0
# but t - phi(t) dies out for large t, and the report says so.
print(check_gauge_conditions(Gauge.damped()).render())
