"""
Classifying Hermitian spaces
============================

Local signs of a Hermitian form from its discriminant, and the global
parity constraint on those signs.
"""

from thetakit.hermitian import GlobalSpaceDescriptor, GramMatrix, classify_local, disc, relevant_places, validate_global
from thetakit.local_fields import QuadExt

E = QuadExt(-1)

# <3> + hyperbolic plane
g = GramMatrix.block_sum(GramMatrix.diagonal(E, [3]), GramMatrix.hyperbolic(E))
print("discriminant:", disc(g))
for v in relevant_places(E, disc(g)):
    c = classify_local(g, v)
    print(f"  place {str(v):>5}: sign {c.sign:+d}", f"signature {c.signature}" if c.signature else "")

# the descriptor built from a Gram matrix is always coherent
print("Gram descriptor valid:", validate_global(GlobalSpaceDescriptor.from_gram(g)).ok)

# a single flipped place cannot occur globally
lonely = GlobalSpaceDescriptor(E, 3).with_signs({"3": -1})
print("one flipped place:", validate_global(lonely).violations)
pair = GlobalSpaceDescriptor(E, 3).with_signs({"3": -1, "7": -1})
print("two flipped inert places valid:", validate_global(pair).ok)
