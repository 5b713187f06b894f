from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetakit.hermitian import GlobalSpaceDescriptor
from thetakit.local_fields import CharacterTag, Place, QuadExt, place_behavior
from thetakit.theta_tower import (
    PIPELINE_VERDICT,
    RootNumberInconsistency,
    WeilDescriptor,
    WittTower,
    center_compatible,
    conservation_complete,
    counterexample_pipeline,
    descriptor_transform,
    dichotomy,
    howe_ps_conclusion,
    partner_tower,
    rallis_exponent,
    tower_status,
    u1_global_nonvanishing,
    u1_local_nonvanishing,
)

TOWERS = [WittTower(1, 1), WittTower(1, -1), WittTower(0, 1), WittTower(2, -1)]

# (dimV, dim W0, r0, r) -> (global kind, exponent); worked by hand from (dimV - dimW0 - r - r0)/2
RALLIS_TABLE = {
    (1, 1, 0, 0): ("cuspidal", None),
    (1, 1, 0, 1): ("square_integrable_noncuspidal", Fraction(-1, 2)),
    (1, 1, 0, 2): ("square_integrable_noncuspidal", Fraction(-1)),
    (1, 1, 0, 5): ("square_integrable_noncuspidal", Fraction(-5, 2)),
    (1, 1, 1, 1): ("cuspidal", None),
    (1, 1, 1, 2): ("square_integrable_noncuspidal", Fraction(-3, 2)),
    (1, 1, 1, 5): ("square_integrable_noncuspidal", Fraction(-3)),
    (1, 0, 0, 1): ("noncuspidal_boundary", Fraction(0)),
    (1, 0, 0, 2): ("square_integrable_noncuspidal", Fraction(-1, 2)),
    (4, 0, 0, 2): ("noncuspidal", Fraction(1)),
    (4, 0, 0, 4): ("noncuspidal_boundary", Fraction(0)),
    (4, 2, 0, 4): ("square_integrable_noncuspidal", Fraction(-1)),
}


def test_tower_shapes():
    assert WittTower(1, 1).dim(3) == 7
    assert WittTower(2, -1).parity == "even"
    with pytest.raises(ValueError):
        WittTower(0, -1)
    with pytest.raises(ValueError):
        WittTower(3, 1)
    assert partner_tower(WittTower(0, 1)) == WittTower(2, -1)
    assert partner_tower(WittTower(1, -1)) == WittTower(1, 1)


def test_conservation_examples():
    fo = conservation_complete(1, (WittTower(1, 1), 0))
    assert (fo.r0_b, fo.tower_b.dim(fo.r0_b)) == (1, 3)
    assert conservation_complete(1, (WittTower(1, 1), 1)).r0_b == 0
    fo = conservation_complete(2, (WittTower(0, 1), 0))
    assert fo.tower_b.base_dim == 2 and fo.tower_b.dim(fo.r0_b) == 6 and fo.r0_b == 2


def test_conservation_inconsistent():
    with pytest.raises(ValueError):
        conservation_complete(1, (WittTower(1, 1), 2))
    with pytest.raises(ValueError):
        conservation_complete(1, (WittTower(1, 1), -1))


def test_conservation_exhaustive():
    for dimV in range(1, 7):
        for t in TOWERS:
            for r0 in range(0, dimV + 2):
                try:
                    fo = conservation_complete(dimV, (t, r0))
                except ValueError:
                    assert t.dim(r0) > 2 * dimV + 2 - partner_tower(t).base_dim
                    continue
                assert fo.tower_a.dim(fo.r0_a) + fo.tower_b.dim(fo.r0_b) == 2 * dimV + 2
                assert fo.r0_a >= 0 and fo.r0_b >= 0
                assert min(fo.r0_a, fo.r0_b) <= dimV
                assert bool(fo.warnings) == (max(fo.r0_a, fo.r0_b) > dimV)


def test_dichotomy_examples():
    assert dichotomy(1, 1, 1, True) is False
    assert dichotomy(1, 1, 1, False) is True
    assert dichotomy(2, 1, 3, True) is False  # same parity, sums to 2 dimV


def test_dichotomy_preconditions():
    with pytest.raises(ValueError):
        dichotomy(2, 2, 3, True)
    with pytest.raises(ValueError):
        dichotomy(2, 1, 1, True)
    with pytest.raises(ValueError):
        dichotomy(1, 1, 1, True, signs=(1, 1))


def test_dichotomy_swap_consistent():
    for dimV in range(1, 7):
        for dimW in range(0, 2 * dimV + 1):
            other = 2 * dimV - dimW
            for flag in (True, False):
                assert dichotomy(dimV, dimW, other, flag) != flag
                assert dichotomy(dimV, other, dimW, dichotomy(dimV, dimW, other, flag)) == flag


def test_u1_local_rule():
    assert u1_local_nonvanishing(1, 1, 1)
    assert not u1_local_nonvanishing(1, -1, 1)
    for epsV, root in product((1, -1), repeat=2):
        assert sum(u1_local_nonvanishing(epsV, w, root) for w in (1, -1)) == 1


def test_u1_global_rule():
    assert u1_global_nonvanishing({Place(3): True, Place(7): True}, True)
    assert not u1_global_nonvanishing({Place(3): False, Place(7): True}, True)
    assert not u1_global_nonvanishing({Place(3): False}, False, {Place(3): -1})
    with pytest.raises(RootNumberInconsistency):
        u1_global_nonvanishing({Place(3): True}, False, {Place(3): -1})
    with pytest.raises(RootNumberInconsistency):
        u1_global_nonvanishing({Place(3): False}, True, {Place(3): -1})


def test_tower_status():
    fo = conservation_complete(2, (WittTower(1, 1), 1))
    assert tower_status(fo, "a", 0, True).local_kind == "zero"
    assert tower_status(fo, "a", 1, True).local_kind == "supercuspidal"
    st_ = tower_status(fo, "a", 2, False)
    assert st_.nonzero and st_.stable_range and st_.local_kind == "irreducible_non_sc"
    silent = tower_status(fo, "a", 1, False)
    assert silent.local_kind == "irreducible_non_sc" and silent.notes
    with pytest.raises(ValueError):
        tower_status(fo, "c", 1, True)


def test_rallis_table():
    for (dimV, w0, r0, r), (kind, e) in RALLIS_TABLE.items():
        s = rallis_exponent(dimV, w0, r0, r)
        assert s.global_kind == kind, (dimV, w0, r0, r)
        assert s.exponent == e


def test_rallis_rejects_r_below_r0():
    with pytest.raises(ValueError):
        rallis_exponent(1, 1, 1, 0)


def test_rallis_exponent_steps_down():
    for dimV in range(1, 5):
        for w0 in (0, 1, 2):
            for r0 in range(0, dimV + 1):
                es = [rallis_exponent(dimV, w0, r0, r).exponent for r in range(r0 + 1, r0 + 6)]
                assert all(b - a == Fraction(-1, 2) for a, b in zip(es, es[1:]))
                assert rallis_exponent(dimV, w0, r0, r0).global_kind == "cuspidal"


def test_boundary_only_at_the_exception():
    for dimV in range(1, 5):
        for w0 in (0, 1, 2):
            for r0 in range(0, 3):
                for r in range(r0, 8):
                    kind = rallis_exponent(dimV, w0, r0, r).global_kind
                    assert (kind == "noncuspidal_boundary") == (r == dimV and r0 == 0 and w0 == 0 and r > r0)


def _desc(dimV=1, dimW=1):
    ext = QuadExt(-1)
    V = GlobalSpaceDescriptor(ext, dimV)
    W = GlobalSpaceDescriptor(ext, dimW)
    gamma = CharacterTag.base("gamma", 1)
    return WeilDescriptor(V, W, gamma**dimV, gamma**dimW), gamma


def test_descriptor_parity_enforced():
    ext = QuadExt(-1)
    V = GlobalSpaceDescriptor(ext, 1)
    with pytest.raises(ValueError):
        WeilDescriptor(V, V, CharacterTag.trivial(), CharacterTag.base("g", 1))


def test_descriptor_transforms():
    desc, gamma = _desc()
    same, rec = descriptor_transform(desc, ("change_chars", desc.chiV, desc.chiW))
    assert same == desc and rec["identity"]
    scaled, rec = descriptor_transform(desc, ("scale", 3))
    assert len(rec["equivalent_forms"]) == 2
    back, _ = descriptor_transform(scaled, ("scale", Fraction(1, 3)))
    assert back == desc
    dual, _ = descriptor_transform(desc, ("dualize",))
    assert dual != desc
    assert descriptor_transform(dual, ("dualize",))[0] == desc
    with pytest.raises(ValueError):
        descriptor_transform(desc, ("change_chars", CharacterTag.trivial(), desc.chiW))
    assert center_compatible(desc, gamma)


def test_howe_ps_conclusion():
    assert howe_ps_conclusion("chi", True) == "nontempered_principal_series_constituent"
    assert howe_ps_conclusion("chi", False) == "supercuspidal"
    # exactly one of the two lower spaces carries a nonzero lift
    for root in (1, -1):
        outcomes = [howe_ps_conclusion("chi", u1_local_nonvanishing(1, w, root)) for w in (1, -1)]
        assert sorted(outcomes) == ["nontempered_principal_series_constituent", "supercuspidal"]


def test_pipeline_default_takes_flip_branch():
    out = counterexample_pipeline(QuadExt(-1))
    assert out["verdict"] == PIPELINE_VERDICT
    assert out["flipped_places"] == ("2", "3")


def test_pipeline_without_flip():
    out = counterexample_pipeline(QuadExt(-1), {"3": -1, "7": -1})
    assert out["ok"] and out["flipped_places"] is None


def test_pipeline_rejects_invalid_w0():
    with pytest.raises(ValueError):
        counterexample_pipeline(QuadExt(-1), W0_signs={"3": -1})


def _nonsplit(ext, k):
    out, p = [], 2
    while len(out) < k:
        if place_behavior(ext, Place(p)) != "split":
            out.append(p)
        p += 1
        while any(p % m == 0 for m in range(2, p)):
            p += 1
    return out


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([-1, -2, -3, -7, 5, 13]), st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4), st.booleans())
def test_pipeline_always_reaches_verdict(d, signs, flip_w0):
    ext = QuadExt(d)
    places = _nonsplit(ext, 4)
    roots = {str(p): s for p, s in zip(places, signs)}
    prod = 1
    for s in signs:
        prod *= s
    W0 = {str(places[0]): -1, str(places[1]): -1} if flip_w0 else {}
    out = counterexample_pipeline(ext, roots, L_half_nonzero=(prod == 1), W0_signs=W0)
    assert out["verdict"] == PIPELINE_VERDICT
