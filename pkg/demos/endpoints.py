"""
Common endpoints
================

An endpoint of T is a point with Tx = {x}. Scanning the combined gap
H({x}, Sx) + H({x}, Tx) over the space finds one whenever it exists.
"""

from commonfix import ContractionSpec, approximate_endpoint_scan, find_common_endpoint
from commonfix.oracle import generate_certified_instance

###############################################################################
# A random certified pair on eight lattice points.
inst = generate_certified_instance(seed=3, n=8)
scan = approximate_endpoint_scan(inst.space, inst.S, inst.T)
print("combined gap profile:", scan.profile)

result = find_common_endpoint(inst.space, inst.S, inst.T, ContractionSpec.constant(inst.alpha))
print(result.render(inst.space))
