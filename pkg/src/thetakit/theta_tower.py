"""Bookkeeping rules for theta lifts along Witt towers.

Representations are opaque; only their attributes (supercuspidal or not,
first occurrence indices) and the local root-number signs enter. The local
root numbers are caller-supplied signs, already normalized for the additive
character psi(Tr(delta * -)).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from sympy import nextprime

from .hermitian import GlobalSpaceDescriptor, flip_two_places, validate_global
from .local_fields import REAL, CharacterTag, Place, QuadExt, omega_EF, place_behavior, support_places

__all__ = [
    "WittTower",
    "FirstOccurrence",
    "LiftStatus",
    "WeilDescriptor",
    "RootNumberInconsistency",
    "conservation_complete",
    "partner_tower",
    "dichotomy",
    "u1_local_nonvanishing",
    "u1_global_nonvanishing",
    "tower_status",
    "rallis_exponent",
    "descriptor_transform",
    "center_compatible",
    "howe_ps_conclusion",
    "counterexample_pipeline",
    "PIPELINE_VERDICT",
]

PIPELINE_VERDICT = "cuspidal and square-integrable with nontempered unramified components"


class RootNumberInconsistency(ValueError):
    """Supplied local root numbers contradict the global sign bookkeeping."""


@dataclass(frozen=True)
class WittTower:
    """W_r = W_0 + r hyperbolic planes, so dim W_r = base_dim + 2r."""

    base_dim: int
    sign: int = 1
    ext: QuadExt | None = None

    def __post_init__(self):
        if self.base_dim not in (0, 1, 2):
            raise ValueError("anisotropic base has dimension 0, 1 or 2")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.base_dim == 0 and self.sign != 1:
            raise ValueError("the zero space has sign +1")
        if self.base_dim == 2 and self.sign != -1:
            raise ValueError("a 2-dimensional anisotropic base has sign -1")

    @property
    def parity(self) -> str:
        return "odd" if self.base_dim % 2 else "even"

    def dim(self, r: int) -> int:
        return self.base_dim + 2 * r

    def step_of_dim(self, dim: int) -> int | None:
        r, rem = divmod(dim - self.base_dim, 2)
        return r if rem == 0 and r >= 0 else None


def partner_tower(t: WittTower) -> WittTower:
    """The other Witt tower of the same parity."""
    if t.base_dim == 1:
        return WittTower(1, -t.sign, t.ext)
    return WittTower(2 - t.base_dim, -t.sign, t.ext)


@dataclass(frozen=True)
class FirstOccurrence:
    dimV: int
    tower_a: WittTower
    r0_a: int
    tower_b: WittTower
    r0_b: int
    warnings: tuple[str, ...] = ()

    def r0(self, which: str) -> int:
        return self.r0_a if which == "a" else self.r0_b

    def tower(self, which: str) -> WittTower:
        return self.tower_a if which == "a" else self.tower_b


def conservation_complete(dimV: int, known: tuple[WittTower, int]) -> FirstOccurrence:
    """Fill in the first occurrence on the partner tower from the conservation identity."""
    tower, r0 = known
    if dimV < 1:
        raise ValueError("dimV must be positive")
    if r0 < 0:
        raise ValueError("first occurrence index must be >= 0")
    other = partner_tower(tower)
    target = 2 * dimV + 2 - tower.dim(r0)
    r0_other = other.step_of_dim(target)
    if r0_other is None:
        raise ValueError(
            f"no first occurrence on the partner tower: it would need dimension {target} "
            f"over a base of dimension {other.base_dim}"
        )
    warnings = tuple(
        f"first occurrence {r} exceeds dimV = {dimV} on tower with base {t.base_dim}"
        for t, r in ((tower, r0), (other, r0_other))
        if r > dimV
    )
    return FirstOccurrence(dimV, tower, r0, other, r0_other, warnings)


def dichotomy(dimV: int, dimW: int, dimW_prime: int, nonzero_on_W: bool, signs: tuple[int, int] | None = None) -> bool:
    """Whether the lift to W' is nonzero, given the lift to W. W, W' lie in different towers."""
    if dimW + dimW_prime != 2 * dimV:
        raise ValueError(f"dim W + dim W' = {dimW + dimW_prime} differs from 2 dim V = {2 * dimV}")
    if (dimW - dimW_prime) % 2:
        raise ValueError("W and W' must have the same dimension parity")
    if dimW < 0 or dimW_prime < 0:
        raise ValueError("dimensions must be nonnegative")
    if signs is not None and signs[0] == signs[1]:
        raise ValueError("W and W' must lie in different Witt towers")
    return not nonzero_on_W


def u1_local_nonvanishing(epsV: int, epsW0: int, root_number: int) -> bool:
    """Local U1 x U1 lift is nonzero iff eps(V) eps(W0) equals the local root number."""
    for s in (epsV, epsW0, root_number):
        if s not in (1, -1):
            raise ValueError("signs must be +1 or -1")
    return epsV * epsW0 == root_number


def u1_global_nonvanishing(
    local_flags: dict, L_half_nonzero: bool, root_numbers: dict | None = None
) -> bool:
    """Global U1 x U1 lift is nonzero iff every local lift is and the central L-value is nonzero.

    ``root_numbers`` (place -> sign, +1 where absent) feeds the consistency
    checks: with all local lifts nonzero the product of root numbers is +1,
    and a global sign of -1 forces the central value to vanish.
    """
    all_local = all(bool(f) for f in local_flags.values())
    if root_numbers is not None:
        prod = 1
        for s in root_numbers.values():
            prod *= int(s)
        if all_local and prod != 1:
            raise RootNumberInconsistency(
                "all local lifts are nonzero but the local root numbers multiply to -1"
            )
        if prod == -1 and L_half_nonzero:
            raise RootNumberInconsistency("global root number -1 forces L(1/2) = 0")
    return all_local and bool(L_half_nonzero)


@dataclass(frozen=True)
class LiftStatus:
    nonzero: bool
    local_kind: str | None = None
    global_kind: str | None = None
    exponent: Fraction | None = None
    stable_range: bool = False
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {"nonzero": self.nonzero, "stable_range": self.stable_range}
        if self.local_kind is not None:
            out["local_kind"] = self.local_kind
        if self.global_kind is not None:
            out["global_kind"] = self.global_kind
        if self.exponent is not None:
            out["exponent"] = str(self.exponent)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def tower_status(fo: FirstOccurrence, which: str, r: int, pi_supercuspidal: bool) -> LiftStatus:
    """Local lift at step r of one tower."""
    if which not in ("a", "b"):
        raise ValueError("tower must be 'a' or 'b'")
    if r < 0:
        raise ValueError("r must be >= 0")
    r0 = fo.r0(which)
    stable = r >= fo.dimV
    if r < r0:
        return LiftStatus(False, "zero", stable_range=stable)
    if r == r0 and pi_supercuspidal:
        return LiftStatus(True, "supercuspidal", stable_range=stable)
    notes = ()
    if r == r0:
        notes = ("first occurrence of a non-supercuspidal representation: only nonvanishing is known",)
    return LiftStatus(True, "irreducible_non_sc", stable_range=stable, notes=notes)


def rallis_exponent(dimV: int, base_dim_W0: int, r0: int, r: int) -> LiftStatus:
    """Global lift at step r: cuspidality, square-integrability and the constant-term exponent."""
    if not (r >= r0 >= 0):
        raise ValueError("need r >= r0 >= 0")
    e = Fraction(dimV - base_dim_W0 - (r + r0), 2)
    stable = r >= dimV
    if r == r0:
        kind = "cuspidal"
        e = None
    elif stable and r == dimV and r0 == 0 and base_dim_W0 == 0:
        kind = "noncuspidal_boundary"
    elif stable:
        assert e < 0
        kind = "square_integrable_noncuspidal"
    else:
        kind = "noncuspidal"
    return LiftStatus(True, global_kind=kind, exponent=e, stable_range=stable)


@dataclass(frozen=True)
class WeilDescriptor:
    """Data fixing a Weil representation of U(V) x U(W): spaces, splitting characters, psi_a."""

    V: GlobalSpaceDescriptor
    W: GlobalSpaceDescriptor
    chiV: CharacterTag
    chiW: CharacterTag
    psi_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "psi_scale", Fraction(self.psi_scale))
        if self.psi_scale == 0:
            raise ValueError("psi scale must be nonzero")
        if self.V.ext != self.W.ext:
            raise ValueError("V and W must live over the same quadratic extension")
        _check_parity(self.chiV, self.V.dim, "chiV")
        _check_parity(self.chiW, self.W.dim, "chiW")


def _check_parity(chi: CharacterTag, dim: int, name: str):
    if chi.restriction_parity != dim % 2:
        raise ValueError(f"{name} must restrict to omega^{dim} on Q-ideles")


def _scale_space(desc: GlobalSpaceDescriptor, a: Fraction) -> GlobalSpaceDescriptor:
    # disc(a * V) = a^dim disc(V)
    if desc.dim % 2 == 0:
        return desc
    flips = {v for v in support_places(a, desc.ext.d) if omega_EF(a, desc.ext, v) == -1}
    return replace(desc, deviations=frozenset(set(desc.deviations) ^ flips))


def descriptor_transform(desc: WeilDescriptor, t: tuple) -> tuple[WeilDescriptor, dict]:
    """Apply ('change_chars', chiV', chiW'), ('scale', a) or ('dualize',)."""
    kind = t[0]
    if kind == "change_chars":
        new_v, new_w = t[1], t[2]
        _check_parity(new_v, desc.V.dim, "chiV'")
        _check_parity(new_w, desc.W.dim, "chiW'")
        tv, tw = new_v / desc.chiV, new_w / desc.chiW
        record = {
            "twist_on_U(W)": f"({tv}) o i o det_W",
            "twist_on_U(V)": f"({tw}) o i o det_V",
            "identity": tv.is_trivial() and tw.is_trivial(),
        }
        return replace(desc, chiV=new_v, chiW=new_w), record
    if kind == "scale":
        a = Fraction(t[1])
        if a == 0:
            raise ValueError("scale must be nonzero")
        out = replace(desc, psi_scale=desc.psi_scale * a)
        record = {
            "equivalent_forms": [
                {"V": _scale_space(out.V, a).to_json(), "W": out.W.to_json(), "psi_scale": str(desc.psi_scale)},
                {"V": out.V.to_json(), "W": _scale_space(out.W, a).to_json(), "psi_scale": str(desc.psi_scale)},
            ]
        }
        return out, record
    if kind == "dualize":
        out = replace(desc, chiV=desc.chiV.inverse(), chiW=desc.chiW.inverse(), psi_scale=-desc.psi_scale)
        return out, {"note": "complex conjugate of the Weil representation"}
    raise ValueError(f"unknown transform {kind!r}")


def center_compatible(desc: WeilDescriptor, gamma: CharacterTag) -> bool:
    """True when (chiV, chiW) = (gamma^dimV, gamma^dimW) for a conjugate-symplectic gamma,
    the case where the splittings agree on the two centers."""
    if gamma.restriction_parity != 1:
        raise ValueError("gamma must be conjugate-symplectic")
    return desc.chiV == gamma ** desc.V.dim and desc.chiW == gamma ** desc.W.dim


def howe_ps_conclusion(chi_tag, lower_lift_nonzero: bool) -> str:
    """Local lift of a character of U1 to a 3-dimensional space."""
    if lower_lift_nonzero:
        return "nontempered_principal_series_constituent"
    return "supercuspidal"


def _non_split_primes(ext: QuadExt, count: int, start: int = 2) -> list[Place]:
    out, p = [], start
    while len(out) < count:
        if place_behavior(ext, Place(p)) != "split":
            out.append(Place(p))
        p = nextprime(p)
    return out


def _first_inert_unramified(ext: QuadExt, avoid: set) -> Place:
    p = 3
    while True:
        v = Place(p)
        if v not in avoid and place_behavior(ext, v) == "inert":
            return v
        p = nextprime(p)


@dataclass
class PipelineTrace:
    steps: list = field(default_factory=list)

    def log(self, **kw):
        self.steps.append(kw)


def counterexample_pipeline(
    ext: QuadExt,
    root_numbers: dict | None = None,
    L_half_nonzero: bool = True,
    W0_signs: dict | None = None,
    delta=None,
) -> dict:
    """Build a cuspidal, square-integrable, nontempered automorphic lift of the trivial character.

    V = <1>, chi = 1 and chiV = chiW. ``root_numbers`` are the local signs of
    the U1 x U1 rule (place -> +-1, +1 where absent) and ``W0_signs`` the local
    signs of the 1-dimensional skew space W0.
    """
    from .weights import hps_local_parameter, is_tempered, satake_of_parameter

    roots = {Place.parse(k): int(v) for k, v in (root_numbers or {}).items()}
    if delta is None:
        from .hermitian import EElement

        delta = EElement(0, 1, ext.d)
    W0 = GlobalSpaceDescriptor(ext, 1, "skew", delta).with_signs(W0_signs or {})
    check = validate_global(W0)
    if not check.ok:
        raise ValueError("W0 is not a global skew-Hermitian space: " + "; ".join(check.violations))
    V = GlobalSpaceDescriptor(ext, 1)
    trace = PipelineTrace()

    def local_flags(W):
        places = set(roots) | set(W.deviations) | {REAL}
        return {v: u1_local_nonvanishing(V.sign(v), W.sign(v), roots.get(v, 1)) for v in places}

    flags = local_flags(W0)
    lower = u1_global_nonvanishing(flags, L_half_nonzero, roots)
    trace.log(step="lower_lift", W0=W0.to_json(), local_flags={str(k): f for k, f in sorted(flags.items(), key=lambda kv: kv[0].sort_key())}, nonzero=lower)

    flipped = None
    if lower:
        v1, v2 = _non_split_primes(ext, 2)
        W0 = flip_two_places(W0, v1, v2)
        flipped = (str(v1), str(v2))
        flags = local_flags(W0)
        lower = u1_global_nonvanishing(flags, L_half_nonzero, roots)
        trace.log(step="flip", places=list(flipped), W0=W0.to_json(), nonzero=lower)
        assert not lower, "flipping two local spaces must kill the lower lift"

    # W1 = W0 + H: the lower step vanishes, so the first occurrence is r0 = 1
    status = rallis_exponent(dimV=1, base_dim_W0=1, r0=1, r=1)
    square_integrable = status.global_kind == "cuspidal" or status.global_kind == "square_integrable_noncuspidal"
    trace.log(step="rallis", status=status.to_json())

    v = _first_inert_unramified(ext, set(roots) | set(W0.deviations))
    s = satake_of_parameter(hps_local_parameter(), v.p)
    tempered = is_tempered(s)
    trace.log(step="satake", place=str(v), exponents=sorted(str(e) for e in s.exponents()), tempered=tempered)

    ok = status.global_kind == "cuspidal" and square_integrable and not tempered
    return {
        "verdict": PIPELINE_VERDICT if ok else "pipeline failed",
        "ok": ok,
        "flipped_places": flipped,
        "W": W0.to_json(),
        "trace": trace.steps,
    }
