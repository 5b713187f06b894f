"""A-parameter families, component groups, the character eps_psi and the
multiplicity formula.

Root numbers are inputs carried on the data; nothing here computes an
L-function. Characters of the elementary abelian 2-groups that occur are
sign vectors (values on a fixed list of generators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exact_arith import Cyclotomic
from .local_fields import CharacterTag, Place, QuadExt, place_behavior
from .weights import (
    A1xA1,
    C2,
    G2,
    G2_TO_SL2xSL2,
    SP4_TO_SL2xSL2,
    decompose,
    irreducible_character,
)

__all__ = [
    "CuspDatum",
    "AParameter",
    "ComponentGroup",
    "AdjointPiece",
    "component_groups",
    "adjoint_decomposition",
    "epsilon_psi",
    "multiplicity",
    "enumerate_packet",
    "centralizer_dimension",
    "dihedral_transfer",
    "hps_sp4_dataset",
    "hps_u3_labelings",
    "MissingRootNumber",
]

FAMILIES = ("SK", "HPS_U3", "G2_short", "G2_long", "HPS_Sp4")


class MissingRootNumber(ValueError):
    pass


@dataclass(frozen=True)
class CuspDatum:
    """A cuspidal representation tau of PGL2 through its finite shadow."""

    label: str = "tau"
    S_ds: frozenset = field(default_factory=frozenset)
    root_number: int | None = None
    sym3_root_number: int | None = None
    dihedral: tuple[QuadExt, CharacterTag] | None = None

    def __post_init__(self):
        object.__setattr__(self, "S_ds", frozenset(Place.parse(p) for p in self.S_ds))
        for s in (self.root_number, self.sym3_root_number):
            if s not in (None, 1, -1):
                raise ValueError("root numbers are signs")
        if self.dihedral is not None and self.dihedral[1].restriction_parity != 1:
            raise ValueError("the character of a dihedral datum must be conjugate-symplectic")


@dataclass(frozen=True)
class AParameter:
    family: str
    tau: CuspDatum | None = None
    ext: QuadExt | None = None
    chi: CharacterTag | None = None
    mu: CharacterTag | None = None
    root_number_E: int | None = None  # eps_E(1/2, chi mu^-1) for HPS_U3
    arthur_trivial: bool = False  # replace the Arthur SL2 by the trivial map
    provenance: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in ("SK", "G2_short", "G2_long") and self.tau is None:
            raise ValueError(f"{self.family} needs a cusp datum")
        if self.family == "HPS_U3":
            if self.ext is None or self.chi is None or self.mu is None:
                raise ValueError("HPS_U3 needs ext, chi and mu")
            if self.mu.restriction_parity != 0:
                raise ValueError("mu must be conjugate-orthogonal")
            if self.chi.restriction_parity != 1:
                raise ValueError("chi must be conjugate-symplectic")
        if self.family == "HPS_Sp4" and self.ext is None:
            raise ValueError("HPS_Sp4 needs the quadratic algebra E")


@dataclass(frozen=True)
class ComponentGroup:
    """(Z/2)^rank with named generators."""

    rank: int
    labels: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return 2**self.rank

    def elements(self):
        return list(product((0, 1), repeat=self.rank))

    def characters(self):
        return list(product((1, -1), repeat=self.rank))

    def to_json(self):
        return {"rank": self.rank, "labels": list(self.labels)}


MU2 = ComponentGroup(1, ("s",))
TRIVIAL = ComponentGroup(0)


def component_groups(psi: AParameter, places=()) -> tuple[ComponentGroup, dict]:
    """Global component group and the local ones at the given places (plus S_ds when defined)."""
    places = [Place.parse(p) for p in places]
    fam = psi.family
    if fam in ("SK", "G2_short", "G2_long"):
        every = sorted(set(places) | set(psi.tau.S_ds), key=Place.sort_key)
        return MU2, {v: (MU2 if v in psi.tau.S_ds else TRIVIAL) for v in every}
    if fam == "HPS_U3":
        return MU2, {v: (TRIVIAL if place_behavior(psi.ext, v) == "split" else MU2) for v in places}
    data = hps_sp4_dataset()
    g = ComponentGroup(data["component_group_rank"])
    return g, {v: None for v in places}


@dataclass(frozen=True)
class AdjointPiece:
    """eta (x) rho (x) S_r inside the adjoint representation of the dual group."""

    eta: int  # value of the sign character on the generator of S_psi
    rho: str
    rho_dim: int
    rho_type: str
    r: int
    rho_degree: int = 0  # k for Sym^k rho

    @property
    def dim(self) -> int:
        return self.rho_dim * self.r

    def to_json(self):
        return {
            "eta": "sign" if self.eta == -1 else "trivial",
            "rho": self.rho,
            "rho_type": self.rho_type,
            "r": self.r,
            "dim": self.dim,
        }


def _rho_name(k: int) -> str:
    return {0: "1", 1: "rho"}.get(k, f"Sym^{k} rho")


# (ambient system, restriction to SL2 x SL2, highest root, which factor carries rho)
_ADJOINT_MODELS = {
    "SK": (C2, SP4_TO_SL2xSL2, (2, 0), 0),
    "G2_short": (G2, G2_TO_SL2xSL2, (0, 1), 0),  # rho -> SL2_long, Arthur -> SL2_short
    "G2_long": (G2, G2_TO_SL2xSL2, (0, 1), 1),  # rho -> SL2_short, Arthur -> SL2_long
}


def adjoint_decomposition(psi: AParameter) -> list[AdjointPiece]:
    """Branch the adjoint representation of the dual group along rho x Arthur-SL2."""
    if psi.family not in _ADJOINT_MODELS:
        raise ValueError(f"adjoint decomposition not provided for {psi.family}")
    system, matrix, top, rho_slot = _ADJOINT_MODELS[psi.family]
    adj = irreducible_character(system, top).restrict(matrix, A1xA1)
    pieces = []
    for hw, mult in sorted(decompose(adj).items()):
        a, b = hw[rho_slot], hw[1 - rho_slot]
        if psi.arthur_trivial:
            reps = [(a, 1)] * (b + 1)
        else:
            reps = [(a, b + 1)]
        for _ in range(mult):
            for k, r in reps:
                # the generator of S_psi is -1 in the rho factor; it acts on Sym^k by (-1)^k
                pieces.append(
                    AdjointPiece(
                        eta=-1 if k % 2 else 1,
                        rho=_rho_name(k),
                        rho_dim=k + 1,
                        rho_type="symplectic" if k % 2 else "orthogonal",
                        r=r,
                        rho_degree=k,
                    )
                )
    assert sum(p.dim for p in pieces) == adj.dim
    return pieces


def _piece_root_number(psi: AParameter, piece: AdjointPiece) -> int:
    need = {1: ("root_number", psi.tau.root_number), 3: ("sym3_root_number", psi.tau.sym3_root_number)}
    if piece.rho_degree not in need:
        raise MissingRootNumber(f"no root number available for {piece.rho}")
    name, val = need[piece.rho_degree]
    if val is None:
        raise MissingRootNumber(f"{name} of the cusp datum is required")
    return val


def epsilon_psi(psi: AParameter) -> int:
    """Value of eps_psi on the generator of S_psi = mu_2 (+1 trivial, -1 sign)."""
    if psi.family == "HPS_U3":
        if psi.arthur_trivial:
            return 1
        if psi.root_number_E is None:
            raise MissingRootNumber("eps_E(1/2, chi mu^-1) is required")
        return psi.root_number_E
    if psi.family == "HPS_Sp4":
        return hps_sp4_dataset()["epsilon_psi"]
    value = 1
    for piece in adjoint_decomposition(psi):
        if piece.r % 2 == 0 and piece.rho_type == "symplectic":
            if _piece_root_number(psi, piece) == -1:
                value *= piece.eta
    return value


def multiplicity(eta, eps) -> int:
    """m = (1/|S|) sum_s eps(s) eta(s); characters of (Z/2)^k as sign vectors on generators."""
    eta, eps = tuple(eta), tuple(eps)
    if len(eta) != len(eps):
        raise ValueError("characters of groups of different rank")
    for x in eta + eps:
        if x not in (1, -1):
            raise ValueError("characters take values +1 or -1")
    return int(eta == eps)


def _packet_places(psi: AParameter, model_places) -> list[Place]:
    model = {Place.parse(p) for p in model_places}
    if psi.family in ("SK", "G2_short", "G2_long"):
        missing = psi.tau.S_ds - model
        if missing:
            raise ValueError("model places miss " + ", ".join(sorted(map(str, missing))))
        return sorted(psi.tau.S_ds, key=Place.sort_key)
    if psi.family == "HPS_U3":
        return sorted((v for v in model if place_behavior(psi.ext, v) != "split"), key=Place.sort_key)
    raise ValueError(f"packet enumeration not provided for {psi.family}")


def enumerate_packet(psi: AParameter, model_places=None) -> dict:
    """All members of the global packet supported on the model places, with multiplicities.

    The global S_psi = mu_2 maps diagonally into every local mu_2, so a member
    with local signs (e_v) restricts to the character prod_v e_v.
    """
    if model_places is None:
        model_places = psi.tau.S_ds if psi.tau is not None else ()
    S = _packet_places(psi, model_places)
    eps = epsilon_psi(psi)
    members = []
    for signs in product((1, -1), repeat=len(S)):
        restricted = 1
        for s in signs:
            restricted *= s
        members.append(({str(v): s for v, s in zip(S, signs)}, multiplicity((restricted,), (eps,))))
    return {
        "places": [str(v) for v in S],
        "epsilon_psi": eps,
        "members": [{"signs": s, "multiplicity": m} for s, m in members],
        "count_m1": sum(m for _, m in members),
    }


# ------------------------------------------------------------------ matrices


def _as_cyc(x) -> Cyclotomic:
    return x if isinstance(x, Cyclotomic) else Cyclotomic.rational(Fraction(x))


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Cyclotomic.rational(0)) for j in range(p)] for i in range(n)]


def _transpose(a):
    return [list(r) for r in zip(*a)]


def _rank(rows) -> int:
    rows = [list(r) for r in rows if any(not x.is_zero() for x in r)]
    if not rows:
        return 0
    ncol = len(rows[0])
    rank = 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def standard_symplectic_form(n2: int):
    n = n2 // 2
    J = [[0] * n2 for _ in range(n2)]
    for i in range(n):
        J[i][n + i] = 1
        J[n + i][i] = -1
    return J


def centralizer_dimension(generators, group: str = "Sp4", form=None) -> tuple[int, str]:
    """Dimension of {X in Lie(G) : X g = g X for all generators}, by exact elimination.

    ``group`` is 'Sp4' (preserving ``form``, default the standard J) or 'GL3'.
    """
    gens = [[[_as_cyc(x) for x in row] for row in g] for g in generators]
    if group == "Sp4":
        n = 4
        B = [[_as_cyc(x) for x in row] for row in (form or standard_symplectic_form(4))]
    elif group == "GL3":
        n = 3
        B = None
    else:
        raise ValueError("group must be 'Sp4' or 'GL3'")
    for g in gens:
        if len(g) != n or any(len(r) != n for r in g):
            raise ValueError(f"generator is not {n} x {n}")
        if B is not None:
            if _matmul(_matmul(_transpose(g), B), g) != B:
                raise ValueError("generator does not preserve the symplectic form")
        elif _rank(g) < n:
            raise ValueError("generator is singular")
    zero = Cyclotomic.rational(0)
    # unknown X[i][j] is variable i*n+j; every linear condition is one row
    eqs = []
    if B is not None:
        # X^T B + B X = 0
        for i in range(n):
            for j in range(n):
                row = [zero] * (n * n)
                for k in range(n):
                    row[k * n + i] = row[k * n + i] + B[k][j]
                    row[k * n + j] = row[k * n + j] + B[i][k]
                eqs.append(row)
    for g in gens:
        # (X g - g X)[i][j]
        for i in range(n):
            for j in range(n):
                row = [zero] * (n * n)
                for k in range(n):
                    row[i * n + k] = row[i * n + k] + g[k][j]
                    row[k * n + j] = row[k * n + j] - g[i][k]
                eqs.append(row)
    dim = n * n - _rank(eqs)
    note = "discrete: centralizer is finite" if dim == 0 else f"centralizer has dimension {dim}"
    return dim, note


def embed_block_sl2xsl2(a, b):
    """(a, b) in SL2 x SL2 as a block matrix of Sp4 for the standard form on (e1, e2, f1, f2)."""
    z = Cyclotomic.rational(0)
    g = [[z] * 4 for _ in range(4)]
    for (i, j), (p, q) in {(0, 0): (0, 0), (0, 1): (0, 2), (1, 0): (2, 0), (1, 1): (2, 2)}.items():
        g[p][q] = _as_cyc(a[i][j])
        g[p + 1][q + 1] = _as_cyc(b[i][j])
    return g


def _kron(a, b):
    return [[_as_cyc(a[i // 2][j // 2]) * _as_cyc(b[i % 2][j % 2]) for j in range(4)] for i in range(4)]


def hps_sp4_dataset(order: int = 5) -> dict:
    """Worked data for rho x id : L x SL2 -> O2 x SL2 -> Sp4 (tensor product model).

    The quadratic plane has form [[0,1],[1,0]], the symplectic plane
    [[0,1],[-1,0]]; the image of rho is generated by a torus element of the
    given order and the reflection swapping the isotropic lines.
    """
    z = Cyclotomic.zeta(order)
    Q = [[0, 1], [1, 0]]
    J = [[0, 1], [-1, 0]]
    form = _kron(Q, J)
    I2 = [[1, 0], [0, 1]]
    torus = [[z, 0], [0, z.inverse()]]
    refl = [[0, 1], [1, 0]]
    upper = [[1, 1], [0, 1]]
    lower = [[1, 0], [1, 1]]
    gens = [_kron(torus, I2), _kron(refl, I2), _kron(I2, upper), _kron(I2, lower)]
    lie_dim, note = centralizer_dimension(gens, "Sp4", form)
    # associative commutant of the image inside End(C^4)
    zero = Cyclotomic.rational(0)
    eqs = []
    for g in gens:
        for i in range(4):
            for j in range(4):
                row = [zero] * 16
                for k in range(4):
                    row[i * 4 + k] = row[i * 4 + k] + g[k][j]
                    row[k * 4 + j] = row[k * 4 + j] - g[i][k]
                eqs.append(row)
    commutant = 16 - _rank(eqs)
    # commutant = scalars, so the centralizer is {+-1} = centre of Sp4 and S_psi is trivial
    rank = 0 if commutant == 1 else None
    return {
        "generators": gens,
        "form": form,
        "lie_dim": lie_dim,
        "note": note,
        "commutant_dim": commutant,
        "component_group_rank": rank,
        "adjoint": ["1 (x) S_3", "Ind(chi^2) (x) S_3", "det (x) S_1"],
        "epsilon_psi": 1,
        "status": "computed data, reported only",
    }


def dihedral_transfer(tau: CuspDatum) -> AParameter:
    """The Howe-PS parameter chi^-2 + chi (x) S_2 of U3 attached to a dihedral tau."""
    if tau.dihedral is None:
        raise ValueError("tau is not dihedral")
    ext, chi = tau.dihedral
    return AParameter(
        "HPS_U3", ext=ext, chi=chi, mu=chi ** -2, provenance="from G2 long root (dihedral tau)"
    )


def hps_u3_labelings(psi: AParameter, local_root_numbers: dict) -> dict:
    """Compare two labelings of the local packets built from the two Hermitian lines V_v^+-.

    Model: at each listed non-split place the packet is {theta(V_v^+), theta(V_v^-)}.
    Global Hermitian lines have prod_v eps(V_v) = +1 and all lift nonzero.
    Labeling 'by_space' calls theta(V_v^e) pi_v^e; labeling 'by_space_times_root'
    calls it pi_v^(e * eps_v) with eps_v the local root number. Each labeling
    is checked against the members the multiplicity formula selects.
    """
    if psi.family != "HPS_U3":
        raise ValueError("labelings concern the U3 Howe-PS family")
    roots = {Place.parse(k): int(v) for k, v in local_root_numbers.items()}
    places = sorted((v for v in roots if place_behavior(psi.ext, v) != "split"), key=Place.sort_key)
    global_root = 1
    for v in places:
        global_root *= roots[v]
    if psi.root_number_E is not None and psi.root_number_E != global_root:
        raise ValueError("local root numbers do not multiply to the parameter's root number")
    predicted = set()
    for signs in product((1, -1), repeat=len(places)):
        p = 1
        for s in signs:
            p *= s
        if p == global_root:
            predicted.add(signs)
    spaces = [s for s in product((1, -1), repeat=len(places)) if _prod(s) == 1]
    realized = {
        "by_space": set(spaces),
        "by_space_times_root": {tuple(e * roots[v] for e, v in zip(s, places)) for s in spaces},
    }
    return {
        "places": [str(v) for v in places],
        "global_root_number": global_root,
        "satisfies_formula": {k: v == predicted for k, v in realized.items()},
        "note": "computed comparison; not a claim about which labeling is intended",
    }


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out
