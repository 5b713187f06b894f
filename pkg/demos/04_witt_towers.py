"""
First occurrence in Witt towers
===============================

Given where a representation first appears in one tower, the partner
tower's first occurrence is forced. Further up, the lift picks up a
nontempered exponent.
"""

from thetakit.local_fields import QuadExt
from thetakit.theta_tower import WittTower, conservation_complete, counterexample_pipeline, rallis_exponent

for dimV in (1, 2, 3):
    fo = conservation_complete(dimV, (WittTower(1, 1), 0))
    print(f"dimV={dimV}: odd+ tower from r0=0, partner {fo.tower_b} first at r0={fo.r0_b} "
          f"(dims {fo.tower_a.dim(fo.r0_a)} + {fo.tower_b.dim(fo.r0_b)})")

print("\nexponents along the tower, dimV = 1, base 1, r0 = 0")
for r in range(0, 5):
    s = rallis_exponent(1, 1, 0, r)
    print(f"  r={r}: {s.global_kind:32s} exponent {s.exponent}")

out = counterexample_pipeline(QuadExt(-1))
print("\npipeline:", out["verdict"])
for step in out["trace"]:
    print("  ", step["step"])
