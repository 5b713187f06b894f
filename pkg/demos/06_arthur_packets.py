"""
Packets and multiplicities
==========================

Which members of a nontempered packet occur automorphically depends on
a single sign attached to the parameter.
"""

from thetakit.arthur import AParameter, CuspDatum, enumerate_packet, epsilon_psi

for eps in (1, -1):
    tau = CuspDatum("tau", frozenset({"infty", "2", "3"}), root_number=eps)
    psi = AParameter("SK", tau=tau)
    out = enumerate_packet(psi)
    print(f"root number {eps:+d}: eps_psi = {epsilon_psi(psi):+d}, {out['count_m1']} of {len(out['members'])} members occur")
    for m in out["members"]:
        if m["multiplicity"]:
            print("    ", m["signs"])
