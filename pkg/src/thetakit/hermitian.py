"""Hermitian and skew-Hermitian spaces over E = Q(sqrt d).

A space is given either concretely by a :class:`GramMatrix` or abstractly by
a :class:`GlobalSpaceDescriptor` listing the places where the local sign is -1.
Skew-Hermitian spaces are normalized by a trace-zero element delta: the form
delta^-1 * A is Hermitian and carries all the sign data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .local_fields import Place, QuadExt, omega_EF, place_behavior, support_places

__all__ = [
    "EElement",
    "GramMatrix",
    "LocalSpaceClass",
    "GlobalSpaceDescriptor",
    "ValidationReport",
    "disc",
    "skew_disc",
    "classify_local",
    "validate_global",
    "flip_two_places",
    "relevant_places",
    "random_invertible",
]


@dataclass(frozen=True)
class EElement:
    """a + b*sqrt(d)."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of(cls, x, d: int) -> "EElement":
        if isinstance(x, EElement):
            return x
        return cls(Fraction(x), Fraction(0), d)

    def _chk(self, o: "EElement"):
        if self.d != o.d:
            raise ValueError("elements of different quadratic fields")

    def __add__(self, o):
        o = EElement.of(o, self.d)
        self._chk(o)
        return EElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return EElement(-self.a, -self.b, self.d)

    def __sub__(self, o):
        return self + (-EElement.of(o, self.d))

    def __rsub__(self, o):
        return EElement.of(o, self.d) - self

    def __mul__(self, o):
        o = EElement.of(o, self.d)
        self._chk(o)
        return EElement(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self) -> "EElement":
        return EElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def inverse(self) -> "EElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in E")
        c = self.conj()
        return EElement(c.a / n, c.b / n, self.d)

    def __truediv__(self, o):
        return self * EElement.of(o, self.d).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = EElement.of(1, self.d)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        if not isinstance(o, EElement):
            return NotImplemented
        return (self.a, self.b, self.d) == (o.a, o.b, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def to_json(self) -> list:
        return [self.a.numerator, self.a.denominator, self.b.numerator, self.b.denominator]

    @classmethod
    def from_json(cls, q, d: int) -> "EElement":
        if len(q) == 2:
            return cls(Fraction(q[0]), Fraction(q[1]), d)
        an, ad, bn, bd = q
        return cls(Fraction(an, ad), Fraction(bn, bd), d)

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def _mat_det(rows: list[list[EElement]], d: int) -> EElement:
    m = [list(r) for r in rows]
    n = len(m)
    det = EElement.of(1, d)
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return EElement.of(0, d)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            if not m[r][c].is_zero():
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix of an eps-Hermitian form: conj(A)^T = eps * A."""

    ext: QuadExt
    eps: int
    entries: tuple[tuple[EElement, ...], ...]

    def __post_init__(self):
        d = self.ext.d
        rows = tuple(tuple(EElement.of(x, d) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square and nonempty")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        for i in range(n):
            for j in range(n):
                if rows[j][i].conj() != rows[i][j] * self.eps:
                    raise ValueError(f"entry ({i},{j}) breaks the eps-Hermitian symmetry")

    @property
    def n(self) -> int:
        return len(self.entries)

    def det(self) -> EElement:
        return _mat_det([list(r) for r in self.entries], self.ext.d)

    def is_degenerate(self) -> bool:
        return self.det().is_zero()

    def congruent(self, P) -> "GramMatrix":
        """P^* A P for an n x n matrix P over E."""
        d = self.ext.d
        P = [[EElement.of(x, d) for x in r] for r in P]
        n = self.n
        A = self.entries
        AP = [[sum((A[i][k] * P[k][j] for k in range(n)), EElement.of(0, d)) for j in range(n)] for i in range(n)]
        out = [
            [sum((P[k][i].conj() * AP[k][j] for k in range(n)), EElement.of(0, d)) for j in range(n)]
            for i in range(n)
        ]
        return GramMatrix(self.ext, self.eps, tuple(tuple(r) for r in out))

    def scaled(self, c: EElement) -> "GramMatrix":
        """The form c * A; c must keep the eps-symmetry (rational c, or trace-zero c flipping eps)."""
        c = EElement.of(c, self.ext.d)
        new_eps = self.eps if c.b == 0 else (-self.eps if c.a == 0 else None)
        if new_eps is None:
            raise ValueError("scalar must be rational or trace zero")
        return GramMatrix(self.ext, new_eps, tuple(tuple(c * x for x in r) for r in self.entries))

    @classmethod
    def diagonal(cls, ext: QuadExt, values, eps: int = 1) -> "GramMatrix":
        vals = [EElement.of(v, ext.d) for v in values]
        n = len(vals)
        rows = [[vals[i] if i == j else EElement.of(0, ext.d) for j in range(n)] for i in range(n)]
        return cls(ext, eps, tuple(tuple(r) for r in rows))

    @classmethod
    def block_sum(cls, *blocks: "GramMatrix") -> "GramMatrix":
        ext, eps = blocks[0].ext, blocks[0].eps
        if any(b.ext != ext or b.eps != eps for b in blocks):
            raise ValueError("blocks must share field and symmetry type")
        n = sum(b.n for b in blocks)
        zero = EElement.of(0, ext.d)
        rows = [[zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    rows[off + i][off + j] = b.entries[i][j]
            off += b.n
        return cls(ext, eps, tuple(tuple(r) for r in rows))

    @classmethod
    def hyperbolic(cls, ext: QuadExt) -> "GramMatrix":
        return cls(ext, 1, ((0, 1), (1, 0)))

    def to_json(self) -> dict:
        return {
            "d": self.ext.d,
            "eps": self.eps,
            "gram": [[x.to_json() for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GramMatrix":
        ext = QuadExt(int(obj["d"]))
        rows = tuple(tuple(EElement.from_json(q, ext.d) for q in r) for r in obj["gram"])
        return cls(ext, int(obj.get("eps", 1)), rows)


def _sign_power(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


def disc(g: GramMatrix) -> Fraction:
    """(-1)^(n(n-1)/2) det A for a Hermitian Gram matrix."""
    if g.eps != 1:
        raise ValueError("disc needs a Hermitian form; use skew_disc for skew-Hermitian ones")
    det = g.det()
    if det.is_zero():
        raise ValueError("degenerate form")
    assert det.is_rational(), "Hermitian determinant must be rational"
    return _sign_power(g.n) * det.a


def _check_delta(delta: EElement) -> EElement:
    if delta.is_zero() or delta.trace() != 0:
        raise ValueError("delta must be nonzero with trace zero")
    return delta


def skew_disc(g: GramMatrix, delta: EElement) -> Fraction:
    """(-1)^(n(n-1)/2) delta^-n det A for a skew-Hermitian Gram matrix."""
    if g.eps != -1:
        raise ValueError("skew_disc needs a skew-Hermitian form")
    delta = _check_delta(EElement.of(delta, g.ext.d))
    return disc(g.scaled(delta.inverse()))


def _hermitian_signature(g: GramMatrix) -> tuple[int, int]:
    # congruence diagonalization; each pivot is a rational diagonal entry
    d = g.ext.d
    m = [list(r) for r in g.entries]
    pos = neg = 0
    while m:
        n = len(m)
        piv = next((i for i in range(n) if not m[i][i].is_zero()), None)
        if piv is None:
            i, j = next(((i, j) for i in range(n) for j in range(n) if not m[i][j].is_zero()), (None, None))
            if i is None:
                raise ValueError("degenerate form")
            # v_i <- v_i + c v_j with c = conj(m[i][j]) makes the new diagonal 2 N(m_ij)
            c = m[i][j].conj()
            P = [[EElement.of(1 if r == s else 0, d) for s in range(n)] for r in range(n)]
            P[j][i] = c
            m = [list(r) for r in GramMatrix(g.ext, 1, tuple(tuple(r) for r in m)).congruent(P).entries]
            piv = i
        h = m[piv][piv]
        assert h.is_rational()
        if h.a > 0:
            pos += 1
        else:
            neg += 1
        inv = h.inverse()
        rest = [k for k in range(n) if k != piv]
        m = [[m[r][s] - m[r][piv] * inv * m[piv][s] for s in rest] for r in rest]
    return pos, neg


@dataclass(frozen=True)
class LocalSpaceClass:
    """Local isometry class: dimension and sign, plus a signature at an inert real place."""

    dim: int
    place: Place
    sign: int
    signature: tuple[int, int] | None = None

    def to_json(self) -> dict:
        out = {"dim": self.dim, "place": str(self.place), "sign": self.sign}
        if self.signature is not None:
            out["signature"] = list(self.signature)
        return out


def classify_local(g: GramMatrix, v: Place, delta: EElement | None = None) -> LocalSpaceClass:
    """Local class of the space at v. Skew forms need the normalizing delta."""
    v = Place.parse(v)
    if g.is_degenerate():
        raise ValueError("degenerate form")
    if g.eps == 1:
        herm, dv = g, disc(g)
    else:
        if delta is None:
            raise ValueError("skew-Hermitian classification needs delta")
        delta = _check_delta(EElement.of(delta, g.ext.d))
        herm = g.scaled(delta.inverse())
        dv = disc(herm)
    if place_behavior(g.ext, v) == "split":
        return LocalSpaceClass(g.n, v, 1)
    sign = omega_EF(dv, g.ext, v)
    sig = _hermitian_signature(herm) if v.is_real else None
    return LocalSpaceClass(g.n, v, sign, sig)


def relevant_places(ext: QuadExt, *values) -> list[Place]:
    """Places outside which every local sign is automatically +1."""
    return support_places(ext.d, *values)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "notes": list(self.notes)}


@dataclass(frozen=True)
class GlobalSpaceDescriptor:
    """A global space through its local signs: ``deviations`` lists places with sign -1.

    For ``kind == "skew"`` the signs are those of delta^-1 * W.
    """

    ext: QuadExt
    dim: int
    kind: str = "hermitian"
    delta: EElement | None = None
    deviations: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind not in ("hermitian", "skew"):
            raise ValueError("kind must be 'hermitian' or 'skew'")
        if self.kind == "skew":
            if self.delta is None:
                raise ValueError("skew descriptor needs delta")
            object.__setattr__(self, "delta", _check_delta(EElement.of(self.delta, self.ext.d)))
        object.__setattr__(self, "deviations", frozenset(Place.parse(p) for p in self.deviations))

    def sign(self, v: Place) -> int:
        return -1 if Place.parse(v) in self.deviations else 1

    def local_class(self, v: Place) -> LocalSpaceClass:
        return LocalSpaceClass(self.dim, Place.parse(v), self.sign(v))

    def with_signs(self, signs: dict) -> "GlobalSpaceDescriptor":
        devs = {Place.parse(p) for p, s in signs.items() if int(s) == -1}
        return GlobalSpaceDescriptor(self.ext, self.dim, self.kind, self.delta, frozenset(devs))

    @classmethod
    def from_gram(cls, g: GramMatrix, delta: EElement | None = None) -> "GlobalSpaceDescriptor":
        dv = disc(g) if g.eps == 1 else skew_disc(g, delta)
        devs = {v for v in relevant_places(g.ext, dv) if classify_local(g, v, delta).sign == -1}
        return cls(g.ext, g.n, "hermitian" if g.eps == 1 else "skew", delta, frozenset(devs))

    def to_json(self) -> dict:
        out = {"d": self.ext.d, "dim": self.dim, "kind": self.kind}
        if self.delta is not None:
            out["delta"] = [str(self.delta.a), str(self.delta.b)]
        out["signs"] = {str(p): "-1" for p in sorted(self.deviations, key=Place.sort_key)}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GlobalSpaceDescriptor":
        ext = QuadExt(int(obj["d"]))
        delta = None
        if obj.get("delta") is not None:
            a, b = obj["delta"]
            delta = EElement(Fraction(a), Fraction(b), ext.d)
        signs = obj.get("signs", {})
        devs = frozenset(Place.parse(p) for p, s in signs.items() if int(s) == -1)
        return cls(ext, int(obj["dim"]), obj.get("kind", "hermitian"), delta, devs)


def validate_global(desc: GlobalSpaceDescriptor) -> ValidationReport:
    """Check global coherence of the local signs."""
    bad = []
    split = sorted((p for p in desc.deviations if place_behavior(desc.ext, p) == "split"), key=Place.sort_key)
    if split:
        bad.append("split_place: sign -1 at split place(s) " + ", ".join(map(str, split)))
    if len(desc.deviations) % 2:
        bad.append(f"product_formula: product of local signs is -1 ({len(desc.deviations)} places with sign -1)")
    notes = ()
    if desc.kind == "skew":
        notes = ("skew signs are taken for delta^-1 * W; the global rule for skew spaces is the transferred Hermitian one",)
    return ValidationReport(not bad, tuple(bad), notes)


def flip_two_places(desc: GlobalSpaceDescriptor, v1: Place, v2: Place) -> GlobalSpaceDescriptor:
    """Swap the local space at two non-split places for the other one of the same dimension."""
    v1, v2 = Place.parse(v1), Place.parse(v2)
    if v1 == v2:
        raise ValueError("flip needs two distinct places")
    for v in (v1, v2):
        if place_behavior(desc.ext, v) == "split":
            raise ValueError(f"place {v} is split; there is only one local space")
    devs = set(desc.deviations) ^ {v1, v2}
    return GlobalSpaceDescriptor(desc.ext, desc.dim, desc.kind, desc.delta, frozenset(devs))


def random_invertible(ext: QuadExt, n: int, rng, bound: int = 3):
    """A random n x n matrix over E with small integer entries and nonzero determinant."""
    d = ext.d
    while True:
        P = [[EElement(rng.randint(-bound, bound), rng.randint(-bound, bound), d) for _ in range(n)] for _ in range(n)]
        if not _mat_det(P, d).is_zero():
            return P
