"""Formal characters on rank-1 and rank-2 weight lattices, branching checks
for G2 and Sp4, Satake classes and temperedness.

Weights are integer tuples in Dynkin-label coordinates: the i-th entry is
<mu, alpha_i^vee>. With this choice simple roots are the rows of the Cartan
matrix and restriction to a subgroup is an integer matrix whose rows are the
subgroup's simple coroots written in the ambient simple coroots.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product

__all__ = [
    "RootSystem",
    "FormalCharacter",
    "Phase",
    "SatakeClass",
    "LocalParameter",
    "A1",
    "A1xA1",
    "A2",
    "C2",
    "G2",
    "irreducible_character",
    "char_ops",
    "decompose",
    "g2_root_data",
    "G2_TO_SL3",
    "G2_TO_SL2xSL2",
    "SP4_TO_SL2xSL2",
    "verify_g2_branchings",
    "verify_sp4_branching",
    "BranchingError",
    "satake_of_parameter",
    "satake_from_weights",
    "hps_local_parameter",
    "sk_local_parameter",
    "is_tempered",
]


def _inverse(m: tuple[tuple[int, ...], ...]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class RootSystem:
    """A root system given by its Cartan matrix and simple-root lengths squared.

    ``cartan[i][j] = <alpha_i, alpha_j^vee>``.
    """

    name: str
    cartan: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def simple_root(self, i: int) -> tuple[int, ...]:
        return tuple(self.cartan[i])

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        return [self.simple_root(i) for i in range(self.rank)]

    def gram(self) -> list[list[Fraction]]:
        """Pairing matrix of the simple roots."""
        n = self.rank
        return [[Fraction(self.cartan[i][j] * self.lengths[j], 2) for j in range(n)] for i in range(n)]

    @property
    def _weight_form(self) -> list[list[Fraction]]:
        inv = _inverse(self.cartan)
        n = self.rank
        # (omega_i, omega_j) = (A^-1)_ij (alpha_j, alpha_j) / 2
        return [[inv[i][j] * Fraction(self.lengths[j], 2) for j in range(n)] for i in range(n)]

    def pair(self, a, b) -> Fraction:
        f = self._weight_form
        n = self.rank
        return sum((a[i] * f[i][j] * b[j] for i in range(n) for j in range(n)), Fraction(0))

    def root_coords(self, mu) -> tuple[Fraction, ...]:
        """Coordinates of a weight in the basis of simple roots."""
        inv = _inverse(self.cartan)
        n = self.rank
        return tuple(sum((mu[i] * inv[i][j] for i in range(n)), Fraction(0)) for j in range(n))

    def reflect(self, mu, i: int) -> tuple[int, ...]:
        a = self.simple_root(i)
        return tuple(m - mu[i] * x for m, x in zip(mu, a))

    def weyl_orbit(self, mu) -> set:
        mu = tuple(mu)
        seen, todo = {mu}, [mu]
        while todo:
            w = todo.pop()
            for i in range(self.rank):
                r = self.reflect(w, i)
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    def roots(self) -> list[tuple[int, ...]]:
        out = set()
        for a in self.simple_roots:
            out |= self.weyl_orbit(a)
        return sorted(out)

    def positive_roots(self) -> list[tuple[int, ...]]:
        return [r for r in self.roots() if all(c >= 0 for c in self.root_coords(r))]

    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def is_dominant(self, mu) -> bool:
        return all(m >= 0 for m in mu)

    def root_length2(self, r) -> Fraction:
        return self.pair(r, r)

    def __repr__(self):
        return f"RootSystem({self.name})"


A1 = RootSystem("A1", ((2,),), (2,))
A1xA1 = RootSystem("A1xA1", ((2, 0), (0, 2)), (2, 2))
A2 = RootSystem("A2", ((2, -1), (-1, 2)), (2, 2))
# alpha_1 short, alpha_2 long in both non-simply-laced cases
C2 = RootSystem("C2", ((2, -1), (-2, 2)), (2, 4))
G2 = RootSystem("G2", ((2, -1), (-3, 2)), (2, 6))


class FormalCharacter:
    """A finite multiset of weights of one root system."""

    __slots__ = ("system", "mults")

    def __init__(self, system: RootSystem, mults=None):
        self.system = system
        c = Counter()
        for w, m in dict(mults or {}).items():
            w = tuple(w)
            if len(w) != system.rank:
                raise ValueError(f"weight {w} has wrong rank for {system.name}")
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if m:
                c[w] += m
        self.mults = c

    @classmethod
    def from_weights(cls, system: RootSystem, weights) -> "FormalCharacter":
        return cls(system, Counter(tuple(w) for w in weights))

    @property
    def dim(self) -> int:
        return sum(self.mults.values())

    def weights(self) -> list[tuple[int, ...]]:
        return sorted(self.mults.elements())

    def multiplicity(self, w) -> int:
        return self.mults.get(tuple(w), 0)

    def _same(self, other: "FormalCharacter"):
        if self.system != other.system:
            raise ValueError(f"lattice mismatch: {self.system.name} vs {other.system.name}")

    def __add__(self, other: "FormalCharacter") -> "FormalCharacter":
        self._same(other)
        return FormalCharacter(self.system, self.mults + other.mults)

    def __sub__(self, other: "FormalCharacter") -> "FormalCharacter":
        self._same(other)
        diff = Counter(self.mults)
        diff.subtract(other.mults)
        if any(v < 0 for v in diff.values()):
            raise ValueError("difference is not a genuine character")
        return FormalCharacter(self.system, diff)

    def __mul__(self, other: "FormalCharacter") -> "FormalCharacter":
        self._same(other)
        out = Counter()
        for a, m in self.mults.items():
            for b, n in other.mults.items():
                out[tuple(x + y for x, y in zip(a, b))] += m * n
        return FormalCharacter(self.system, out)

    def dual(self) -> "FormalCharacter":
        return FormalCharacter(self.system, {tuple(-x for x in w): m for w, m in self.mults.items()})

    def sym(self, k: int) -> "FormalCharacter":
        if k < 0:
            raise ValueError("k must be >= 0")
        ws = self.weights()
        out = Counter()
        for combo in combinations_with_replacement(range(len(ws)), k):
            w = tuple(sum(ws[i][j] for i in combo) for j in range(self.system.rank))
            out[w] += 1
        return FormalCharacter(self.system, out)

    def restrict(self, matrix, target: RootSystem) -> "FormalCharacter":
        if any(len(row) != self.system.rank for row in matrix) or len(matrix) != target.rank:
            raise ValueError("restriction matrix has the wrong shape")
        out = Counter()
        for w, m in self.mults.items():
            out[tuple(sum(r[i] * w[i] for i in range(len(w))) for r in matrix)] += m
        return FormalCharacter(target, out)

    def is_weyl_invariant(self) -> bool:
        return all(
            self.mults[self.system.reflect(w, i)] == m for w, m in self.mults.items() for i in range(self.system.rank)
        )

    def difference(self, other: "FormalCharacter") -> dict:
        """Signed multiset difference, for error reports."""
        d = Counter(self.mults)
        d.subtract(other.mults)
        return {str(k): v for k, v in sorted(d.items()) if v}

    def __eq__(self, other):
        if not isinstance(other, FormalCharacter):
            return NotImplemented
        return self.system == other.system and +self.mults == +other.mults

    def __hash__(self):
        return hash((self.system, frozenset(self.mults.items())))

    def __repr__(self):
        return f"FormalCharacter({self.system.name}, dim={self.dim})"


def outer_product(a: FormalCharacter, b: FormalCharacter, system: RootSystem = A1xA1) -> FormalCharacter:
    """External tensor product of characters of two factors."""
    out = Counter()
    for x, m in a.mults.items():
        for y, n in b.mults.items():
            out[x + y] += m * n
    return FormalCharacter(system, out)


@lru_cache(maxsize=None)
def _freudenthal(system: RootSystem, hw: tuple[int, ...]) -> tuple:
    if not system.is_dominant(hw):
        raise ValueError(f"{hw} is not dominant")
    pos = system.positive_roots()
    rho = system.rho()
    lr = tuple(a + b for a, b in zip(hw, rho))
    norm_lr = system.pair(lr, lr)
    lowest = min(system.weyl_orbit(hw), key=lambda w: sum(system.root_coords(w)))
    depth = [int(c) for c in system.root_coords(tuple(a - b for a, b in zip(hw, lowest)))]
    simple = system.simple_roots
    mult = {hw: 1}
    # visit weights hw - sum c_i alpha_i in order of increasing height
    levels = sorted(product(*(range(dd + 1) for dd in depth)), key=sum)
    for c in levels:
        if not any(c):
            continue
        mu = tuple(hw[j] - sum(c[i] * simple[i][j] for i in range(system.rank)) for j in range(system.rank))
        mr = tuple(a + b for a, b in zip(mu, rho))
        den = norm_lr - system.pair(mr, mr)
        if den == 0:
            continue
        acc = Fraction(0)
        for a in pos:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                if any(c < 0 for c in system.root_coords(tuple(h - x for h, x in zip(hw, nu)))):
                    break
                m = mult.get(nu, 0)
                if m:
                    acc += m * system.pair(nu, a)
                k += 1
        val = 2 * acc / den
        assert val.denominator == 1 and val >= 0
        if val:
            mult[mu] = int(val)
    return tuple(sorted(mult.items()))


def irreducible_character(system: RootSystem, hw) -> FormalCharacter:
    """Character of the irreducible representation with highest weight hw (Freudenthal)."""
    hw = tuple(hw)
    if system == A1xA1:
        a = irreducible_character(A1, (hw[0],))
        b = irreducible_character(A1, (hw[1],))
        return outer_product(a, b)
    return FormalCharacter(system, dict(_freudenthal(system, hw)))


def decompose(ch: FormalCharacter) -> Counter:
    """Irreducible constituents as a Counter of highest weights (peel off the top repeatedly)."""
    sysm = ch.system
    rest = FormalCharacter(sysm, ch.mults)
    out = Counter()
    while rest.dim:
        top = max(rest.mults, key=lambda w: (sum(sysm.root_coords(w)), w))
        if not sysm.is_dominant(top):
            raise ValueError("not a character of a representation")
        out[top] += 1
        rest = rest - irreducible_character(sysm, top)
    return out


def char_ops(a: FormalCharacter, b: FormalCharacter | None, op):
    """Dispatch: 'tensor', 'direct_sum', ('sym', k), 'dual', ('restrict', matrix, target)."""
    if op == "tensor":
        return a * b
    if op == "direct_sum":
        return a + b
    if op == "dual":
        return a.dual()
    if isinstance(op, tuple) and op[0] == "sym":
        return a.sym(op[1])
    if isinstance(op, tuple) and op[0] == "restrict":
        return a.restrict(op[1], op[2])
    raise ValueError(f"unknown operation {op!r}")


# Restrictions, rows = subgroup simple coroots in ambient simple coroots.
# SL3 inside G2 on the long roots alpha_2 and 3 alpha_1 + alpha_2.
G2_TO_SL3 = ((0, 1), (1, 1))
# SL2_long x SL2_short on the orthogonal pair 3 alpha_1 + 2 alpha_2 and alpha_1.
G2_TO_SL2xSL2 = ((1, 2), (1, 0))
# the two long-root SL2's of Sp4 on 2 alpha_1 + alpha_2 and alpha_2
SP4_TO_SL2xSL2 = ((1, 1), (0, 1))


def g2_root_data() -> dict:
    """Roots of G2 (Dynkin coordinates), split by length, with an orthogonal long/short pair."""
    roots = G2.roots()
    long_ = [r for r in roots if G2.root_length2(r) == 6]
    short = [r for r in roots if G2.root_length2(r) == 2]
    pair = next((a, b) for a in long_ for b in short if G2.pair(a, b) == 0 and all(c >= 0 for c in G2.root_coords(a)) and all(c >= 0 for c in G2.root_coords(b)))
    return {"roots": roots, "long": long_, "short": short, "orthogonal_pair": pair}


class BranchingError(AssertionError):
    pass


def _std3():
    return irreducible_character(A2, (1, 0))


def _a1(k):
    return irreducible_character(A1, (k,))


def _box(a: int, b: int) -> FormalCharacter:
    return irreducible_character(A1xA1, (a, b))


def _swap(ch: FormalCharacter) -> FormalCharacter:
    return FormalCharacter(ch.system, {(w[1], w[0]): m for w, m in ch.mults.items()})


def verify_g2_branchings(raise_on_failure: bool = True) -> dict:
    """Check the four G2 restriction identities as exact weight-multiset equalities.

    The SL2 x SL2 identities are tested under both assignments of the long
    SL2 to a tensor factor; the report lists which assignments pass.
    """
    seven = irreducible_character(G2, (1, 0))
    adj = irreducible_character(G2, (0, 1))
    std3 = _std3()
    trivial3 = FormalCharacter(A2, {(0, 0): 1})
    sl3 = irreducible_character(A2, (1, 1))
    checks = {}

    def record(name, got, want):
        checks[name] = {
            "ok": got == want,
            "dims": [got.dim, want.dim],
            "difference": got.difference(want),
        }

    record("a: 7 -> SL3 = std3 + 1 + std3^v", seven.restrict(G2_TO_SL3, A2), std3 + trivial3 + std3.dual())
    record("c: adjoint -> SL3 = sl3 + std3 + std3^v", adj.restrict(G2_TO_SL3, A2), sl3 + std3 + std3.dual())
    # factors ordered (long, short) by G2_TO_SL2xSL2
    want_b = _box(1, 1) + _box(0, 2)
    want_d = _box(2, 0) + _box(0, 2) + _box(1, 3)
    conventions = {}
    for conv, m in (("long = std factor", lambda c: c), ("long = Sym^3 factor", _swap)):
        b_ok = seven.restrict(G2_TO_SL2xSL2, A1xA1) == m(want_b)
        d_ok = adj.restrict(G2_TO_SL2xSL2, A1xA1) == m(want_d)
        conventions[conv] = b_ok and d_ok
    record("b: 7 -> SL2xSL2 = std(x)std + 1(x)Sym^2", seven.restrict(G2_TO_SL2xSL2, A1xA1), want_b)
    record("d: adjoint -> SL2xSL2 = sl2 + sl2 + std(x)Sym^3", adj.restrict(G2_TO_SL2xSL2, A1xA1), want_d)

    zero_mult = adj.multiplicity((0, 0))
    ok = all(c["ok"] for c in checks.values()) and zero_mult == 2
    report = {
        "ok": ok,
        "checks": checks,
        "adjoint_zero_weight_multiplicity": zero_mult,
        "passing_conventions": [k for k, v in conventions.items() if v],
        "convention_unique": sum(conventions.values()) == 1,
    }
    if raise_on_failure and not ok:
        bad = {k: v["difference"] for k, v in checks.items() if not v["ok"]}
        raise BranchingError(f"G2 branching failed: {bad}")
    return report


def verify_sp4_branching() -> dict:
    """Adjoint of Sp4 restricted to its two long-root SL2's."""
    adj = irreducible_character(C2, (2, 0))
    got = adj.restrict(SP4_TO_SL2xSL2, A1xA1)
    pieces = decompose(got)
    dims = sorted(((a + 1) * (b + 1) for (a, b), m in pieces.items() for _ in range(m)))
    want = _box(2, 0) + _box(0, 2) + _box(1, 1)
    return {"ok": got == want and adj.dim == 10, "dims": dims, "pieces": {str(k): v for k, v in pieces.items()}}


# ---------------------------------------------------------------- Satake data


@dataclass(frozen=True)
class Phase:
    """A unitary number: product of named unitary unknowns times exp(2 pi i * turn)."""

    mono: tuple[tuple[str, int], ...] = ()
    turn: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "mono", tuple(sorted((k, e) for k, e in self.mono if e)))
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @classmethod
    def named(cls, name: str, e: int = 1) -> "Phase":
        return cls(((name, e),))

    def __mul__(self, o: "Phase") -> "Phase":
        acc = dict(self.mono)
        for k, e in o.mono:
            acc[k] = acc.get(k, 0) + e
        return Phase(tuple(acc.items()), self.turn + o.turn)

    def __pow__(self, e: int) -> "Phase":
        return Phase(tuple((k, x * e) for k, x in self.mono), self.turn * e)

    def conj(self) -> "Phase":
        return self ** -1

    def __str__(self):
        parts = [k if e == 1 else f"{k}^{e}" for k, e in self.mono]
        if self.turn:
            parts.append(f"exp(2pi i {self.turn})")
        return "*".join(parts) or "1"


ONE = Phase()


@dataclass(frozen=True)
class SatakeClass:
    """Eigenvalues q^e * phase, stored as (e, phase) pairs."""

    eigenvalues: tuple[tuple[Fraction, Phase], ...]
    q: int | None = None

    def exponents(self) -> list[Fraction]:
        return sorted((e for e, _ in self.eigenvalues), reverse=True)

    def is_self_dual(self) -> bool:
        a = Counter((e, p) for e, p in self.eigenvalues)
        b = Counter((-e, p.conj()) for e, p in self.eigenvalues)
        return a == b

    def to_json(self) -> list:
        return [{"exponent": str(e), "phase": str(p)} for e, p in self.eigenvalues]


@dataclass(frozen=True)
class LocalParameter:
    """An unramified local parameter: blocks (Frobenius eigenphases, Arthur SL2 dimension r)."""

    blocks: tuple[tuple[tuple[Phase, ...], int], ...]
    ramified: bool = False


def satake_of_parameter(param: LocalParameter, q: int) -> SatakeClass:
    """Satake class of an unramified parameter: each block contributes phase * q^((r-1)/2 - j)."""
    if param.ramified:
        raise ValueError("no Satake parameter at a ramified place")
    eig = []
    for phases, r in param.blocks:
        if r < 1:
            raise ValueError("Arthur SL2 block dimension must be >= 1")
        for ph in phases:
            for j in range(r):
                eig.append((Fraction(r - 1, 2) - j, ph))
    return SatakeClass(tuple(eig), q)


def satake_from_weights(ch: FormalCharacter, rho_factor: int, rho_phase: Phase, q: int) -> SatakeClass:
    """Satake class of rho x Arthur-SL2 composed with a representation of SL2 x SL2.

    A weight (i, j) on the factors gives phase rho_phase^(weight on the rho
    factor) and exponent (weight on the Arthur factor) / 2.
    """
    if ch.system != A1xA1:
        raise ValueError("expects a character of SL2 x SL2")
    arthur = 1 - rho_factor
    eig = [(Fraction(w[arthur], 2), rho_phase ** w[rho_factor]) for w in ch.weights()]
    return SatakeClass(tuple(eig), q)


def hps_local_parameter(chi: Phase = ONE, mu: Phase = ONE) -> LocalParameter:
    """mu + chi (x) S_2 at an inert place."""
    return LocalParameter((((mu,), 1), ((chi,), 2)))


def sk_local_parameter(alpha: Phase | None = None) -> LocalParameter:
    """rho_tau x S_2 through the block SL2 x SL2 in Sp4; rho has Satake phases alpha, alpha^-1."""
    alpha = alpha or Phase.named("alpha")
    return LocalParameter((((alpha, alpha.conj()), 1), ((ONE,), 2)))


def is_tempered(s: SatakeClass) -> bool:
    return all(e == 0 for e, _ in s.eigenvalues)
