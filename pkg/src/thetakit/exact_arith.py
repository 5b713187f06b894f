"""Exact scalars: rationals and elements of cyclotomic fields, plus the
Ramanujan Delta series.

Rationals are plain :class:`fractions.Fraction`.  A :class:`Cyclotomic` is an
element of Q(zeta_N) stored in the power basis 1, z, ..., z^(phi(N)-1) modulo
the N-th cyclotomic polynomial, as integer numerators over one common positive
denominator.  Binary operations embed both operands into the lcm order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational as _RationalABC

from sympy import totient
from sympy.ntheory import factorint

__all__ = [
    "Cyclotomic",
    "cyc_arith",
    "cyclotomic_polynomial",
    "delta_coefficients",
    "ramanujan_bound_check",
]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic; coefficients low->high
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num[: len(den) - 1]), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds x^k mod Phi_n for 0 <= k < 2n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(2 * n):
        rows.append(tuple(cur))
        # multiply by x and reduce the overflowing top coefficient
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return int(totient(n))


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=None)
def _normalized_trace_of_power(n: int, k: int) -> Fraction:
    # Tr(zeta_n^k) / phi(n) = mu(m) / phi(m) with m = n / gcd(k, n)
    m = n // gcd(k % n, n)
    return Fraction(_mobius(m), _phi(m))


def _reduce_dense(n: int, dense) -> list:
    """Reduce a coefficient list on powers z^0..z^(len-1) (len <= 2n) mod Phi_n."""
    table = _reduction_table(n)
    deg = _phi(n)
    out = [0] * deg
    for k, c in enumerate(dense):
        if c:
            row = table[k % n] if k >= 2 * n else table[k]
            for j in range(deg):
                if row[j]:
                    out[j] += c * row[j]
    return out


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    return None


class Cyclotomic:
    """An exact element of the cyclotomic field Q(zeta_N).

    >>> i = Cyclotomic.zeta(4)
    >>> i * i == -1
    True
    """

    __slots__ = ("order", "_num", "_den")

    def __init__(self, order: int, coeffs=None):
        if order < 1:
            raise ValueError("order must be a positive integer")
        self.order = order
        dense: list[Fraction] = [Fraction(0)] * order
        if coeffs is None:
            pass
        elif isinstance(coeffs, dict):
            for k, c in coeffs.items():
                dense[k % order] += Fraction(c)
        else:
            for k, c in enumerate(coeffs):
                dense[k % order] += Fraction(c)
        den = 1
        for c in dense:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in dense]
        self._set(_reduce_dense(order, ints), den)

    def _set(self, num: list[int], den: int) -> None:
        g = den
        for c in num:
            if c:
                g = gcd(g, c)
                if g == 1:
                    break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self._num = tuple(num)
        self._den = den

    @classmethod
    def _raw(cls, order: int, num: list[int], den: int) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.order = order
        obj._set(num, den)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "Cyclotomic":
        """The root of unity zeta_order ** k."""
        dense = [0] * order
        dense[k % order] = 1
        return cls._raw(order, _reduce_dense(order, dense), 1)

    @classmethod
    def rational(cls, value, order: int = 1) -> "Cyclotomic":
        value = Fraction(value)
        num = [0] * _phi(order)
        num[0] = value.numerator
        return cls._raw(order, num, value.denominator)

    # -- structure ----------------------------------------------------
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Power-basis coefficients as Fractions (length phi(order))."""
        return tuple(Fraction(c, self._den) for c in self._num)

    def embed(self, order: int) -> "Cyclotomic":
        """Same value viewed inside Q(zeta_order); order must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot embed order {self.order} into {order}")
        step = order // self.order
        dense = [0] * order
        for k, c in enumerate(self._num):
            dense[k * step] += c
        return Cyclotomic._raw(order, _reduce_dense(order, dense), self._den)

    def _common(self, other: "Cyclotomic"):
        n = _lcm(self.order, other.order)
        return self.embed(n), other.embed(n), n

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            return other
        f = _as_fraction(other)
        if f is None:
            return None
        return Cyclotomic.rational(f, self.order)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self._num[0], self._den)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._common(other)
        den = _lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return Cyclotomic._raw(n, [x * fa + y * fb for x, y in zip(a._num, b._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._common(other)
        prod = [0] * (2 * len(a._num) - 1 if a._num else 0)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic._raw(n, _reduce_dense(n, prod), a._den * b._den)

    __rmul__ = __mul__

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism zeta -> zeta**k (k coprime to the order)."""
        n = self.order
        if gcd(k, n) != 1:
            raise ValueError("Galois exponent must be a unit")
        dense = [0] * n
        for j, c in enumerate(self._num):
            if c:
                dense[(j * k) % n] += c
        return Cyclotomic._raw(n, _reduce_dense(n, dense), self._den)

    def conj(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta**-1."""
        return self.galois(-1 % self.order if self.order > 1 else 1)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        acc = Cyclotomic.rational(1, self.order)
        for k in _units(self.order):
            acc = acc * self.galois(k)
        return acc.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.to_fraction(), self.order)
        # x * prod_{sigma != 1} sigma(x) = N(x)
        acc = Cyclotomic.rational(1, self.order)
        for k in _units(self.order):
            if k % self.order != 1 % self.order:
                acc = acc * self.galois(k)
        nrm = (acc * self).to_fraction()
        return acc * (1 / nrm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def abs2(self) -> Fraction:
        """x * conj(x) as a Fraction; raises ValueError if it is not rational."""
        return (self * self.conj()).to_fraction()

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, _ = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        # the normalized trace is independent of the ambient order
        t = Fraction(0)
        for k, c in enumerate(self._num):
            if c:
                t += c * _normalized_trace_of_power(self.order, k)
        return hash(t / self._den)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.order}^{k}")
        return "Cyclotomic(" + (" + ".join(terms) or "0") + ")"


def cyc_arith(a: Cyclotomic, b: Cyclotomic | None, op: str):
    """Dispatch for the four primitive operations: add, mul, conj, eq."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


def delta_coefficients(n_max: int) -> list[int]:
    """tau(1), ..., tau(n_max) from the truncated product q * prod (1 - q^n)^24."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    # work with prod (1-q^n)^24 up to q^(n_max-1), then shift by q
    size = n_max
    series = [0] * size
    series[0] = 1
    for n in range(1, size):
        # multiply by (1 - q^n) 24 times; each pass is an in-place backwards update
        for _ in range(24):
            for k in range(size - 1, n - 1, -1):
                series[k] -= series[k - n]
    return series


def ramanujan_bound_check(p: int, tau_p: int) -> bool:
    """|tau(p)| <= 2 p^(11/2), compared as tau(p)^2 <= 4 p^11."""
    return tau_p * tau_p <= 4 * p**11
