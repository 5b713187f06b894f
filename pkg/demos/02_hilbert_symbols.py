"""
Hilbert symbols and norm characters
===================================

Local quadratic symbols at every place and the product formula that ties
them together.
"""

import math
from fractions import Fraction

from thetakit.local_fields import QuadExt, hilbert_symbol, omega_EF, place_behavior, support_places

a, b = Fraction(-3, 5), 14
row = {str(v): hilbert_symbol(a, b, v) for v in support_places(a, b)}
print(f"({a}, {b})_v:", row)
print("product over all places:", math.prod(row.values()))

# over the Gaussian field, which primes are norms locally?
E = QuadExt(-1)
for p in (2, 3, 5, 7, 11, 13):
    print(p, place_behavior(E, p), "omega(3) =", omega_EF(3, E, p))
