"""The Heisenberg group and Schrodinger model over a finite field F_q, q an odd prime.

Functions live on Y = F_q^n; the symplectic space is W = X + Y with
<(x, y), (x', y')> = x.y' - y.x'. An operator is stored as integer
coefficients of zeta_q^k for each matrix entry (an array of shape (q, m, m),
m = q^n) over a common positive denominator. Since 1 + zeta + ... + zeta^(q-1)
= 0, two coefficient vectors are equal in Q(zeta_q) exactly when they differ
by a constant; the stored form keeps the last coefficient at zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np
from sympy import isprime, legendre_symbol

from .exact_arith import Cyclotomic

__all__ = [
    "FiniteSymplectic",
    "HeisenbergElement",
    "ExactOperator",
    "h_mul",
    "h_inv",
    "rho",
    "svn_check",
    "generator",
    "intertwiner",
    "act",
    "word_matrix",
    "word_operator",
    "canonical_word",
    "canonical_operator",
    "cocycle",
    "parity_operator",
    "even_odd_split",
    "linear_intertwiner",
    "nonsplit_torus_theta",
]

_INT_LIMIT = 2**62


@dataclass(frozen=True)
class FiniteSymplectic:
    q: int
    n: int = 1

    def __post_init__(self):
        if self.q == 2 or not isprime(self.q):
            raise ValueError("q must be an odd prime")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def dim_model(self) -> int:
        return self.q**self.n

    @property
    def half(self) -> int:
        return pow(2, -1, self.q)

    def form(self, w1, w2) -> int:
        n, q = self.n, self.q
        x1, y1, x2, y2 = w1[:n], w1[n:], w2[:n], w2[n:]
        return (sum(a * b for a, b in zip(x1, y2)) - sum(a * b for a, b in zip(y1, x2))) % q

    @property
    def Y(self) -> np.ndarray:
        return _all_vectors(self.q, self.n)

    def index(self, y) -> int:
        return int(sum(int(c) % self.q * self.q**i for i, c in enumerate(y)))

    def elements(self):
        """All Heisenberg elements (for exhaustive checks)."""
        for w in product(range(self.q), repeat=2 * self.n):
            for t in range(self.q):
                yield HeisenbergElement(w, t)


@lru_cache(maxsize=None)
def _all_vectors(q: int, n: int) -> np.ndarray:
    m = q**n
    idx = np.arange(m)
    return np.stack([(idx // q**i) % q for i in range(n)], axis=1)


@dataclass(frozen=True)
class HeisenbergElement:
    w: tuple[int, ...]
    t: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(c) for c in self.w))
        object.__setattr__(self, "t", int(self.t))


def h_mul(fs: FiniteSymplectic, a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """(w1, t1)(w2, t2) = (w1 + w2, t1 + t2 + <w1, w2>/2)."""
    q = fs.q
    w = tuple((x + y) % q for x, y in zip(a.w, b.w))
    return HeisenbergElement(w, (a.t + b.t + fs.half * fs.form(a.w, b.w)) % q)


def h_inv(fs: FiniteSymplectic, a: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(tuple((-x) % fs.q for x in a.w), (-a.t) % fs.q)


class ExactOperator:
    """Square matrix over Q(zeta_q) as integer group-ring coefficients over a denominator."""

    __slots__ = ("q", "coeffs", "den")

    def __init__(self, q: int, coeffs: np.ndarray, den: int = 1, normalize: bool = True):
        self.q = q
        self.coeffs = coeffs
        self.den = int(den)
        if normalize:
            self._normalize()

    def _normalize(self):
        c = self.coeffs - self.coeffs[self.q - 1][None, :, :]
        g = self.den
        nz = c[c != 0]
        if nz.size:
            g = gcd(g, int(np.gcd.reduce(np.abs(nz).astype(object) if c.dtype == object else np.abs(nz))))
        else:
            g = self.den
        if g > 1:
            c = c // g
            self.den //= g
        if c.dtype == object and (not c.size or int(np.max(np.abs(c))) < _INT_LIMIT):
            c = c.astype(np.int64)
        self.coeffs = c

    @property
    def size(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def identity(cls, q: int, m: int) -> "ExactOperator":
        c = np.zeros((q, m, m), dtype=np.int64)
        c[0] = np.eye(m, dtype=np.int64)
        return cls(q, c)

    @classmethod
    def from_phases(cls, q: int, m: int, rows, cols, exps) -> "ExactOperator":
        """Monomial matrix with entries zeta^exps at (rows, cols)."""
        c = np.zeros((q, m, m), dtype=np.int64)
        c[np.asarray(exps) % q, rows, cols] += 1
        return cls(q, c)

    @classmethod
    def scalar(cls, value: Cyclotomic, q: int, m: int) -> "ExactOperator":
        vec, den = _cyc_to_vector(value, q)
        c = np.zeros((q, m, m), dtype=object)
        for k in range(q):
            if vec[k]:
                c[k] = np.eye(m, dtype=object) * vec[k]
        return cls(q, c, den)

    def _check(self, other: "ExactOperator"):
        if self.q != other.q or self.size != other.size:
            raise ValueError("operators act on different spaces")

    def __matmul__(self, other: "ExactOperator") -> "ExactOperator":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        ma = int(np.max(np.abs(a))) if a.size else 0
        mb = int(np.max(np.abs(b))) if b.size else 0
        if ma * mb * self.size * self.q >= _INT_LIMIT:
            a, b = a.astype(object), b.astype(object)
        out = np.zeros_like(np.matmul(a[0], b))
        for i in range(self.q):
            if np.any(a[i]):
                out = out + np.roll(np.matmul(a[i], b), i, axis=0)
        return ExactOperator(self.q, out, self.den * other.den)

    def _aligned(self, other: "ExactOperator"):
        self._check(other)
        den = self.den * other.den // gcd(self.den, other.den)
        a = self.coeffs * (den // self.den)
        b = other.coeffs * (den // other.den)
        return a, b, den

    def __add__(self, other: "ExactOperator") -> "ExactOperator":
        a, b, den = self._aligned(other)
        return ExactOperator(self.q, a + b, den)

    def __sub__(self, other: "ExactOperator") -> "ExactOperator":
        a, b, den = self._aligned(other)
        return ExactOperator(self.q, a - b, den)

    def __neg__(self):
        return ExactOperator(self.q, -self.coeffs, self.den)

    def scale(self, value) -> "ExactOperator":
        if isinstance(value, (int, Fraction)):
            value = Fraction(value)
            return ExactOperator(self.q, self.coeffs * value.numerator, self.den * value.denominator)
        return ExactOperator.scalar(value, self.q, self.size) @ self

    def __eq__(self, other):
        if not isinstance(other, ExactOperator):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return bool(np.array_equal(a, b))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def adjoint(self) -> "ExactOperator":
        """Conjugate transpose."""
        idx = (-np.arange(self.q)) % self.q
        return ExactOperator(self.q, np.transpose(self.coeffs[idx], (0, 2, 1)).copy(), self.den)

    def power(self, e: int) -> "ExactOperator":
        out = ExactOperator.identity(self.q, self.size)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def entry(self, i: int, j: int) -> Cyclotomic:
        return Cyclotomic(self.q, [Fraction(int(c), self.den) for c in self.coeffs[:, i, j]])

    def trace(self) -> Cyclotomic:
        vec = np.trace(self.coeffs, axis1=1, axis2=2)
        return Cyclotomic(self.q, [Fraction(int(c), self.den) for c in vec])

    def is_scalar_multiple_of(self, other: "ExactOperator") -> Cyclotomic | None:
        """lambda with self = lambda * other, or None."""
        self._check(other)
        nz = np.argwhere(np.any(other.coeffs != 0, axis=0))
        if nz.size == 0:
            return None
        i, j = (int(v) for v in nz[0])
        lam = self.entry(i, j) / other.entry(i, j)
        return lam if self == other.scale(lam) else None

    def to_rows(self) -> list:
        """Row-major dump: each entry as a list of [numerator, denominator] pairs on zeta^0..zeta^(q-1)."""
        return [
            [[[int(self.coeffs[k, i, j]), self.den] for k in range(self.q)] for j in range(self.size)]
            for i in range(self.size)
        ]


def _cyc_to_vector(value, q: int) -> tuple[list[int], int]:
    if not isinstance(value, Cyclotomic):
        value = Cyclotomic.rational(Fraction(value))
    if q % value.order:
        raise ValueError(f"scalar of order {value.order} does not live in Q(zeta_{q})")
    value = value.embed(q)
    coeffs = list(value.coefficients) + [Fraction(0)] * (q - len(value.coefficients))
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


def rho(fs: FiniteSymplectic, h: HeisenbergElement, psi_index: int = 1) -> ExactOperator:
    """Schrodinger model: rho(x, y, t) = rho(0, y) rho(x, 0) psi(t + x.y/2)."""
    q, n, m = fs.q, fs.n, fs.dim_model
    if psi_index % q == 0:
        raise ValueError("psi_index must be nonzero mod q")
    x = np.array(h.w[:n], dtype=np.int64)
    y0 = np.array(h.w[n:], dtype=np.int64)
    Y = fs.Y
    c = (h.t + fs.half * int(x @ y0)) % q
    shifted = (Y + y0) % q
    cols = (shifted * (q ** np.arange(n))).sum(axis=1)
    exps = psi_index * (-(shifted @ x) + c)
    return ExactOperator.from_phases(q, m, np.arange(m), cols, exps)


def svn_check(fs: FiniteSymplectic, psi_index: int = 1, other_index: int | None = None) -> dict:
    """Exact character inner products of the Schrodinger model over the whole Heisenberg group."""
    if fs.dim_model > 343:
        raise ValueError("model too large for exhaustive character sums")
    q = fs.q
    if other_index is None:
        other_index = next(a for a in range(1, q) if a != psi_index % q) if q > 2 else None
    total = Cyclotomic.rational(0, q)
    cross = Cyclotomic.rational(0, q)
    order = 0
    for h in fs.elements():
        t1 = rho(fs, h, psi_index).trace()
        t2 = rho(fs, h, other_index).trace()
        total = total + t1 * t1.conj()
        cross = cross + t1 * t2.conj()
        order += 1
    self_ip = (total / order).to_fraction()
    cross_ip = cross / order
    return {
        "inner_product": self_ip,
        "irreducible": self_ip == 1,
        "other_index": other_index,
        "cross_inner_product": cross_ip.to_fraction() if cross_ip.is_rational() else cross_ip,
        "orthogonal": cross_ip == 0,
    }


# ------------------------------------------------------------------ Sp_2n


def generator(fs: FiniteSymplectic, kind: str, data=None) -> tuple:
    """A generator tuple: ('m', a), ('n', B) or ('w',), validated and reduced mod q."""
    q, n = fs.q, fs.n
    if kind == "w":
        return ("w",)
    if kind not in ("m", "n") or data is None:
        raise ValueError(f"unknown generator {kind!r} or missing matrix")
    M = np.array(data, dtype=np.int64).reshape(n, n) % q
    if kind == "m":
        if _det_mod(M, q) == 0:
            raise ValueError("m(a) needs invertible a")
        return ("m", tuple(map(tuple, M.tolist())))
    if kind == "n":
        if not np.array_equal(M, M.T):
            raise ValueError("n(B) needs symmetric B")
    return ("n", tuple(map(tuple, M.tolist())))


def _det_mod(M: np.ndarray, q: int) -> int:
    a = [[int(x) % q for x in r] for r in M.tolist()]
    n, det = len(a), 1
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c] % q
        inv = pow(a[c][c], -1, q)
        for r in range(c + 1, n):
            f = a[r][c] * inv % q
            a[r] = [(x - f * y) % q for x, y in zip(a[r], a[c])]
    return det % q


def _inv_mod(M: np.ndarray, q: int) -> np.ndarray:
    n = M.shape[0]
    a = [[int(x) % q for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(M.tolist())]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        inv = pow(a[c][c], -1, q)
        a[c] = [x * inv % q for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[c])]
    return np.array([r[n:] for r in a], dtype=np.int64)


def _gen_matrix(fs: FiniteSymplectic, g: tuple) -> np.ndarray:
    q, n = fs.q, fs.n
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    if g[0] == "w":
        out[:n, n:] = eye
        out[n:, :n] = -eye
    elif g[0] == "m":
        a = np.array(g[1], dtype=np.int64)
        out[:n, :n] = a
        out[n:, n:] = _inv_mod(a, q).T
    elif g[0] == "n":
        out[:n, :n] = eye
        out[:n, n:] = np.array(g[1], dtype=np.int64)
        out[n:, n:] = eye
    return out % q


def word_matrix(fs: FiniteSymplectic, word) -> np.ndarray:
    out = np.eye(2 * fs.n, dtype=np.int64)
    for g in word:
        out = (out @ _gen_matrix(fs, g)) % fs.q
    return out


def act(fs: FiniteSymplectic, g: np.ndarray, h: HeisenbergElement) -> HeisenbergElement:
    """Symplectic action on the Heisenberg group: g.(w, t) = (g w, t)."""
    return HeisenbergElement(tuple(int(v) for v in (g @ np.array(h.w)) % fs.q), h.t)


def intertwiner(fs: FiniteSymplectic, g: tuple, psi_index: int = 1) -> ExactOperator:
    """Operator A(g) with A rho(h) = rho(g.h) A, for a generator g (unnormalized)."""
    q, n, m = fs.q, fs.n, fs.dim_model
    Y = fs.Y
    rows = np.arange(m)
    weights = q ** np.arange(n)
    if g[0] == "m":
        a = np.array(g[1], dtype=np.int64)
        cols = (((Y @ a) % q) * weights).sum(axis=1)  # row y -> column a^T y
        return ExactOperator.from_phases(q, m, rows, cols, np.zeros(m, dtype=np.int64))
    if g[0] == "n":
        B = np.array(g[1], dtype=np.int64)
        quad = np.einsum("ij,jk,ik->i", Y, B, Y)
        return ExactOperator.from_phases(q, m, rows, rows, psi_index * fs.half * quad)
    if g[0] == "w":
        R, C = np.meshgrid(rows, rows, indexing="ij")
        exps = psi_index * (Y @ Y.T)
        return ExactOperator.from_phases(q, m, R.ravel(), C.ravel(), exps.ravel())
    raise ValueError(f"not a generator: {g!r}")


def word_operator(fs: FiniteSymplectic, word, psi_index: int = 1, linear: bool = False) -> ExactOperator:
    op = ExactOperator.identity(fs.q, fs.dim_model)
    for g in word:
        A = linear_intertwiner(fs, g, psi_index) if linear else intertwiner(fs, g, psi_index)
        op = op @ A
    return op


def canonical_word(fs: FiniteSymplectic, g: np.ndarray) -> list:
    """Bruhat word for g in SL_2(F_q): m(a) n(b) if c = 0, else n(a/c) m(-1/c) w n(d/c)."""
    if fs.n != 1:
        raise ValueError("canonical words are provided for n = 1 only")
    q = fs.q
    (a, b), (c, d) = (int(v) % q for v in g[0]), (int(v) % q for v in g[1])
    if (a * d - b * c) % q != 1:
        raise ValueError("matrix is not in SL_2")
    if c == 0:
        return [("m", ((a,),)), ("n", ((b * pow(a, -1, q) % q,),))]
    ci = pow(c, -1, q)
    return [("n", ((a * ci % q,),)), ("m", ((-ci % q,),)), ("w",), ("n", ((d * ci % q,),))]


def canonical_operator(fs: FiniteSymplectic, g: np.ndarray, psi_index: int = 1) -> ExactOperator:
    """A fixed intertwiner for an arbitrary g in Sp_2n(F_q).

    For n = 1 it is the product along the Bruhat word. For n > 1 it is the
    projection sum_w rho(g.w) E rho(w)^-1 of the first matrix unit E giving
    a nonzero result.
    """
    if fs.n == 1:
        return word_operator(fs, canonical_word(fs, g), psi_index)
    q, m = fs.q, fs.dim_model
    hs = [HeisenbergElement(w, 0) for w in product(range(q), repeat=2 * fs.n)]
    left = [rho(fs, act(fs, g, h), psi_index) for h in hs]
    right = [rho(fs, h_inv(fs, h), psi_index) for h in hs]
    for j in range(m):
        E = np.zeros((q, m, m), dtype=np.int64)
        E[0, 0, j] = 1
        Eop = ExactOperator(q, E)
        acc = ExactOperator(q, np.zeros((q, m, m), dtype=np.int64))
        for L, R in zip(left, right):
            acc = acc + (L @ Eop @ R)
        if not acc.is_zero():
            return acc
    raise AssertionError("no nonzero projection found")


def cocycle(fs: FiniteSymplectic, word1, word2, psi_index: int = 1) -> Cyclotomic:
    """lambda with A(g1) A(g2) = lambda A(g1 g2), A(g1 g2) the canonical operator."""
    lhs = word_operator(fs, word1, psi_index) @ word_operator(fs, word2, psi_index)
    g = (word_matrix(fs, word1) @ word_matrix(fs, word2)) % fs.q
    rhs = canonical_operator(fs, g, psi_index)
    lam = lhs.is_scalar_multiple_of(rhs)
    if lam is None or lam.is_zero():
        raise ArithmeticError("intertwiners differ by a non-scalar: implementation error")
    return lam


def parity_operator(fs: FiniteSymplectic) -> ExactOperator:
    """f(y) -> f(-y)."""
    q, m = fs.q, fs.dim_model
    cols = ((((-fs.Y) % q)) * (q ** np.arange(fs.n))).sum(axis=1)
    return ExactOperator.from_phases(q, m, np.arange(m), cols, np.zeros(m, dtype=np.int64))


def even_odd_split(fs: FiniteSymplectic, psi_index: int = 1, operators=()) -> dict:
    """Dimensions of even and odd functions; checks the projectors commute with the given operators."""
    q, m = fs.q, fs.dim_model
    P = parity_operator(fs)
    I = ExactOperator.identity(q, m)
    plus = (I + P).scale(Fraction(1, 2))
    minus = (I - P).scale(Fraction(1, 2))
    dims = (plus.trace().to_fraction(), minus.trace().to_fraction())
    ops = list(operators) or [intertwiner(fs, ("w",), psi_index)]
    invariant = all((plus @ A) == (A @ plus) for A in ops)
    return {"dims": (int(dims[0]), int(dims[1])), "invariant": invariant, "projectors": (plus, minus)}


# ------------------------------------------------------------- SL_2 linear


def _fourier_scale(fs: FiniteSymplectic, psi_index: int) -> Cyclotomic:
    # kappa with (kappa F N_1)^3 = I, where N_1 = A(n(1))
    q = fs.q
    F = intertwiner(fs, ("w",), psi_index)
    N = intertwiner(fs, ("n", ((1,),)), psi_index)
    X = (F @ N).power(3)
    mu = X.entry(0, 0)
    assert X == ExactOperator.identity(q, q).scale(mu), "(F N)^3 is not scalar"
    return Cyclotomic.rational(q * int(legendre_symbol(q - 1, q)), q) / mu


def linear_intertwiner(fs: FiniteSymplectic, g: tuple, psi_index: int = 1) -> ExactOperator:
    """Generators of the linear Weil representation of SL_2(F_q).

    m(a) carries the Legendre symbol of a, w the scalar kappa fixed by the
    relation (w n(1))^3 = 1; n(b) is unchanged.
    """
    if fs.n != 1:
        raise ValueError("linear normalization is provided for n = 1")
    A = intertwiner(fs, g, psi_index)
    if g[0] == "m":
        return A.scale(int(legendre_symbol(g[1][0][0] % fs.q, fs.q)))
    if g[0] == "w":
        return A.scale(_fourier_scale(fs, psi_index))
    return A


def _nonresidue(q: int) -> int:
    return next(a for a in range(2, q) if legendre_symbol(a, q) == -1)


def _torus_generator(q: int) -> tuple[int, int, int]:
    nu = _nonresidue(q)
    elems = [(a, b) for a in range(q) for b in range(q) if (a * a - nu * b * b) % q == 1]
    assert len(elems) == q + 1

    def mul(u, v):
        return ((u[0] * v[0] + nu * u[1] * v[1]) % q, (u[0] * v[1] + u[1] * v[0]) % q)

    for e in elems:
        x, k = e, 1
        while x != (1, 0):
            x, k = mul(x, e), k + 1
        if k == q + 1:
            return e[0], e[1], nu
    raise AssertionError("norm-one torus is not cyclic")


def nonsplit_torus_theta(q: int, psi_index: int = 1) -> dict:
    """Decompose the q-dimensional Weil representation restricted to E^1 in SL_2(F_q).

    E = F_q(sqrt nu), nu the least non-residue; E^1 acts on E = F_q^2 by
    multiplication, a + b sqrt(nu) -> [[a, b nu], [b, a]]. Character j sends
    the chosen generator T to zeta_(q+1)^j.
    """
    fs = FiniteSymplectic(q, 1)
    a, b, nu = _torus_generator(q)
    T = np.array([[a, b * nu % q], [b, a]], dtype=np.int64)
    A = word_operator(fs, canonical_word(fs, T), psi_index, linear=True)
    N = q + 1
    powers = [ExactOperator.identity(q, q)]
    for _ in range(N):
        powers.append(powers[-1] @ A)
    if powers[N] != powers[0]:
        raise ArithmeticError("linearized torus generator does not have order q + 1")
    plus, minus = even_odd_split(fs, psi_index, [A])["projectors"]

    def decompose(proj):
        traces = [(proj @ P).trace() if proj is not None else P.trace() for P in powers[:N]]
        for t in traces:
            assert t.is_rational(), "torus traces must be rational"
        mult = {}
        for j in range(N):
            s = Cyclotomic.rational(0, N)
            for k, t in enumerate(traces):
                s = s + Cyclotomic.zeta(N, -j * k) * t.to_fraction()
            v = (s / N).to_fraction()
            assert v.denominator == 1 and v >= 0
            mult[j] = int(v)
        return mult

    full = decompose(None)
    even = decompose(plus)
    odd = decompose(minus)
    return {
        "q": q,
        "nonresidue": nu,
        "generator": T.tolist(),
        "multiplicities": full,
        "even": even,
        "odd": odd,
        "missing": [j for j, v in full.items() if v == 0],
        "multiplicity_free": all(v <= 1 for v in full.values()),
        "dimension": sum(full.values()),
    }


def random_sl2_word(fs: FiniteSymplectic, rng: random.Random, length: int = 3) -> list:
    """A random word in the generators of SL_2(F_q)."""
    q = fs.q
    word = []
    for _ in range(length):
        k = rng.choice("mnw")
        if k == "w":
            word.append(("w",))
        elif k == "m":
            word.append(("m", ((rng.randrange(1, q),),)))
        else:
            word.append(("n", ((rng.randrange(q),),)))
    return word
