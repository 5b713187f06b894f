"""
Exact cyclotomic arithmetic and the discriminant form
=====================================================

Roots of unity as exact numbers, then the first coefficients of
q * prod (1 - q^n)^24 and the bound |tau(p)| <= 2 p^(11/2).
"""

from sympy import primerange

from thetakit.exact_arith import Cyclotomic, delta_coefficients, ramanujan_bound_check

# a primitive cube root of unity satisfies 1 + z + z^2 = 0
z = Cyclotomic.zeta(3)
print("1 + z + z^2 =", 1 + z + z * z)

# mixing orders embeds both sides into a common cyclotomic field
i = Cyclotomic.zeta(4)
w = i * z
print("i * z has order 12 representation:", w)
print("its norm down to Q:", w.norm())

# Gauss sum for q = 5: squares to 5
g = sum(Cyclotomic.zeta(5, k * k) for k in range(5))
print("g^2 =", g * g)

taus = delta_coefficients(30)
print("tau(1..12):", taus[:12])

for p in primerange(2, 30):
    print(f"p={p:2d}  tau(p)={taus[p - 1]:>12d}  bound ok: {ramanujan_bound_check(p, taus[p - 1])}")
