"""
Weight multisets and restriction to subgroups
=============================================

Characters of G2 restricted to SL3 and SL2 x SL2, and the Satake
exponents of a nontempered unramified parameter.
"""

from thetakit.weights import G2, G2_TO_SL3, A2, decompose, hps_local_parameter, irreducible_character, is_tempered, satake_of_parameter, verify_g2_branchings

seven = irreducible_character(G2, (1, 0))
adjoint = irreducible_character(G2, (0, 1))
print("dims:", seven.dim, adjoint.dim)
print("adjoint restricted to SL3:", sorted(decompose(adjoint.restrict(G2_TO_SL3, A2)).elements()))

rep = verify_g2_branchings()
for name, check in rep["checks"].items():
    print(f"  {name}: {'ok' if check['ok'] else 'FAILED'}")

s = satake_of_parameter(hps_local_parameter(), 5)
print("Satake exponents at q=5:", [str(e) for e in s.exponents()], "tempered:", is_tempered(s))
