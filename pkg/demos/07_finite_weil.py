"""
The Weil representation over a finite field
===========================================

The Heisenberg group of F_q^2, its Schrodinger model, and the operators
that implement the SL2 action on it.
"""

import numpy as np

from thetakit.exact_arith import Cyclotomic
from thetakit.weil_finite import FiniteSymplectic, HeisenbergElement, cocycle, even_odd_split, generator, intertwiner, nonsplit_torus_theta, rho, svn_check

fs = FiniteSymplectic(5)
print("character inner product:", svn_check(fs)["inner_product"])

# rho of a central element is a scalar
Z = rho(fs, HeisenbergElement((0, 0), 1))
print("central element acts by", Z.entry(0, 0))

F = intertwiner(fs, generator(fs, "w"))
print("Fourier operator, exponent table of zeta_5:")
powers = [Cyclotomic.zeta(5, k) for k in range(5)]
print(np.array([[powers.index(F.entry(i, j)) for j in range(5)] for i in range(5)]))

print("cocycle(w, w) =", cocycle(fs, [("w",)], [("w",)]))
print("even / odd dims:", even_odd_split(fs)["dims"])

t = nonsplit_torus_theta(5)
print("torus characters:", t["multiplicities"], "missing:", t["missing"])
