"""
A-priori rate bounds
====================

Step gaps obeying gap_n <= gamma gap_(n-1) + 2^-n can be summed into a bound
on d(x_n, x_(n+m)). The shape of the bound depends on whether 2 gamma is
above, below or equal to 1.
"""

import numpy as np

from commonfix import cauchy_bound
from commonfix.solver import regime

for gamma in (0.25, 0.5, 0.75):
    bounds = [cauchy_bound(gamma, n, 5) for n in range(1, 8)]
    print(f"gamma={gamma:<5} {regime(gamma):<15}", " ".join(f"{b:8.4f}" for b in bounds))

###############################################################################
# Compare with the worst sequence the recurrence allows.
gamma, d = 0.75, [1.0]
for k in range(1, 60):
    d.append(gamma * d[-1] + 0.5 ** k)
n = 1
print("extremal tail sum:", np.sum(d[n:]), "bound:", cauchy_bound(gamma, n))
