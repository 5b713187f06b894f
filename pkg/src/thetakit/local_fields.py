"""Places of Q, Hilbert symbols and quadratic extensions Q(sqrt d)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, isprime, legendre_symbol

__all__ = [
    "Place",
    "REAL",
    "QuadExt",
    "CharacterTag",
    "hilbert_symbol",
    "omega_EF",
    "place_behavior",
    "support_places",
    "squarefree_part",
]


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``Place(None)`` is the real place, ``Place(p)`` is p-adic."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_real(self) -> bool:
        return self.p is None

    @classmethod
    def parse(cls, text) -> "Place":
        if isinstance(text, Place):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip().lower()
        if s in ("infty", "inf", "real", "oo", "r"):
            return REAL
        return cls(int(s))

    def __str__(self):
        return "infty" if self.p is None else str(self.p)

    def sort_key(self):
        return (0, 0) if self.p is None else (1, self.p)


REAL = Place(None)


def squarefree_part(n: int) -> int:
    """Signed squarefree part of a nonzero integer."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


@dataclass(frozen=True)
class QuadExt:
    """E = Q(sqrt d) with d squarefree, d not in {0, 1}."""

    d: int

    def __post_init__(self):
        if self.d in (0, 1) or squarefree_part(self.d) != self.d:
            raise ValueError(f"d = {self.d} must be squarefree and not 0 or 1")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d


def _to_int_class(x) -> int:
    # n/d and n*d differ by the square d^2
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol undefined at zero")
    return x.numerator * x.denominator


def _split_p(n: int, p: int) -> tuple[int, int]:
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return a, n


def hilbert_symbol(a, b, v: Place) -> int:
    """Quadratic Hilbert symbol (a, b)_v for nonzero rationals a, b."""
    a, b = _to_int_class(a), _to_int_class(b)
    v = Place.parse(v)
    if v.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    alpha, u = _split_p(a, p)
    beta, w = _split_p(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
        om = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
        e = eps(u) * eps(w) + alpha * om(w) + beta * om(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    if beta % 2:
        s *= int(legendre_symbol(u % p, p))
    if alpha % 2:
        s *= int(legendre_symbol(w % p, p))
    return s


def support_places(*values) -> list[Place]:
    """The real place plus every prime dividing 2 and the given nonzero rationals."""
    primes = {2}
    for x in values:
        x = Fraction(x)
        for n in (x.numerator, x.denominator):
            primes.update(factorint(abs(n)).keys())
    return [REAL] + [Place(p) for p in sorted(primes)]


def omega_EF(x, ext: QuadExt, v: Place) -> int:
    """The quadratic character of E/Q at v: +1 iff x is a local norm."""
    return hilbert_symbol(x, ext.d, v)


def place_behavior(ext: QuadExt, v: Place) -> str:
    """'split', 'inert' or 'ramified'. The real place is 'inert' when d < 0."""
    v = Place.parse(v)
    d = ext.d
    if v.is_real:
        return "split" if d > 0 else "inert"
    p = v.p
    if p == 2:
        if d % 4 != 1:
            return "ramified"
        return "split" if d % 8 == 1 else "inert"
    if d % p == 0:
        return "ramified"
    return "split" if legendre_symbol(d % p, p) == 1 else "inert"


@dataclass(frozen=True)
class CharacterTag:
    """A symbolic character of the idele class group of E.

    ``powers`` maps base-character names to exponents, so products and
    inverses stay symbolic. ``restriction_parity`` records whether the
    restriction to Q-ideles is omega (1) or trivial (0): conjugate-symplectic
    versus conjugate-orthogonal.
    """

    powers: tuple[tuple[str, int], ...] = field(default_factory=tuple)
    restriction_parity: int = 0

    @classmethod
    def base(cls, name: str, restriction_parity: int) -> "CharacterTag":
        return cls(((name, 1),), restriction_parity % 2)

    @classmethod
    def trivial(cls) -> "CharacterTag":
        return cls((), 0)

    def _norm(self, powers: dict) -> tuple:
        return tuple(sorted((k, e) for k, e in powers.items() if e))

    def __mul__(self, other: "CharacterTag") -> "CharacterTag":
        acc = dict(self.powers)
        for k, e in other.powers:
            acc[k] = acc.get(k, 0) + e
        return CharacterTag(self._norm(acc), (self.restriction_parity + other.restriction_parity) % 2)

    def __pow__(self, e: int) -> "CharacterTag":
        acc = {k: x * e for k, x in self.powers}
        return CharacterTag(self._norm(acc), (self.restriction_parity * e) % 2)

    def inverse(self) -> "CharacterTag":
        return self ** -1

    def __truediv__(self, other: "CharacterTag") -> "CharacterTag":
        return self * other.inverse()

    def is_trivial(self) -> bool:
        return not self.powers

    @property
    def kind(self) -> str:
        return "conjugate-symplectic" if self.restriction_parity else "conjugate-orthogonal"

    def __str__(self):
        if not self.powers:
            return "1"
        return "*".join(k if e == 1 else f"{k}^{e}" for k, e in self.powers)
