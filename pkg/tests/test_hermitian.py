import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetakit.hermitian import (
    EElement,
    GlobalSpaceDescriptor,
    GramMatrix,
    classify_local,
    disc,
    flip_two_places,
    random_invertible,
    relevant_places,
    skew_disc,
    validate_global,
)
from thetakit.local_fields import REAL, Place, QuadExt, omega_EF, place_behavior

GAUSS = QuadExt(-1)


def E(a, b=0, d=-1):
    return EElement(a, b, d)


def random_hermitian(ext, n, rng, bound=4):
    d = ext.d
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = EElement(rng.randint(-bound, bound) or 1, 0, d)
        for j in range(i + 1, n):
            x = EElement(rng.randint(-bound, bound), rng.randint(-bound, bound), d)
            rows[i][j], rows[j][i] = x, x.conj()
    return GramMatrix(ext, 1, tuple(tuple(r) for r in rows))


def test_eelement_basics():
    x = E(2, 3)
    assert x.conj().conj() == x
    assert x.norm() == 13
    assert x.trace() == 4
    assert x * x.inverse() == 1
    assert E(5).conj() == E(5)


def test_eelement_json_roundtrip():
    x = EElement(Fraction(1, 2), Fraction(-3, 4), 5)
    assert EElement.from_json(x.to_json(), 5) == x


def test_gram_symmetry_enforced():
    with pytest.raises(ValueError):
        GramMatrix(GAUSS, 1, ((1, E(0, 1)), (E(0, 1), 1)))
    with pytest.raises(ValueError):
        GramMatrix(GAUSS, 1, ((E(0, 1),),))


def test_disc_examples():
    assert disc(GramMatrix.diagonal(GAUSS, [1])) == 1
    assert disc(GramMatrix.hyperbolic(GAUSS)) == 1
    H = GramMatrix.hyperbolic(GAUSS)
    assert disc(GramMatrix.block_sum(GramMatrix.diagonal(GAUSS, [3]), H)) == 3


def test_disc_rejects_degenerate_and_skew():
    with pytest.raises(ValueError):
        disc(GramMatrix.diagonal(GAUSS, [1, 0]))
    skew = GramMatrix(GAUSS, -1, ((E(0, 1),),))
    with pytest.raises(ValueError):
        disc(skew)


@pytest.mark.parametrize("a", [1, 2, 3, 5, 7, 10])
@pytest.mark.parametrize("d", [-1, -3, 2, 5])
def test_line_plus_hyperbolic_sign(a, d):
    ext = QuadExt(d)
    g = GramMatrix.block_sum(GramMatrix.diagonal(ext, [a]), GramMatrix.hyperbolic(ext))
    for v in relevant_places(ext, a):
        assert classify_local(g, v).sign == omega_EF(a, ext, v)


def test_skew_disc_examples():
    delta = E(0, 1)
    line = GramMatrix(GAUSS, -1, ((delta,),))
    assert skew_disc(line, delta) == 1
    for b in (2, 3, 7):
        g = GramMatrix(GAUSS, -1, ((delta * b,),))
        for v in relevant_places(GAUSS, b):
            assert classify_local(g, v, delta).sign == omega_EF(b, GAUSS, v)
    # delta times a Hermitian line carries the Hermitian line's data
    h = GramMatrix.diagonal(GAUSS, [3])
    assert skew_disc(h.scaled(delta), delta) == disc(h)


def test_skew_disc_rejects_bad_delta():
    g = GramMatrix(GAUSS, -1, ((E(0, 1),),))
    with pytest.raises(ValueError):
        skew_disc(g, E(1, 1))


def test_classify_local_examples():
    assert classify_local(GramMatrix.diagonal(GAUSS, [1, 1]), Place(3)).sign == 1
    real = classify_local(GramMatrix.diagonal(GAUSS, [1, -1]), REAL)
    assert real.signature == (1, 1)
    assert classify_local(GramMatrix.hyperbolic(GAUSS), Place(7)).sign == 1
    assert classify_local(GramMatrix.diagonal(GAUSS, [3]), Place(5)).sign == 1  # split


def test_signature_with_zero_diagonal():
    assert classify_local(GramMatrix.hyperbolic(GAUSS), REAL).signature == (1, 1)
    g = GramMatrix(GAUSS, 1, ((0, E(1, 1), 0), (E(1, -1), 0, 0), (0, 0, -2)))
    assert classify_local(g, REAL).signature == (1, 2)


@pytest.mark.parametrize("d", [-1, -3, 2, 5])
def test_invariance_under_basis_change(d):
    ext = QuadExt(d)
    rng = random.Random(1000 + d)
    for _ in range(50):
        n = rng.randint(1, 4)
        g = random_hermitian(ext, n, rng)
        if g.is_degenerate():
            continue
        P = random_invertible(ext, n, rng)
        h = g.congruent(P)
        places = relevant_places(ext, disc(g), disc(h))
        for v in places:
            assert omega_EF(disc(g), ext, v) == omega_EF(disc(h), ext, v)
            assert classify_local(g, v) == classify_local(h, v)


@pytest.mark.parametrize("d", [-1, -3, -7])
def test_real_signature_matches_disc(d):
    ext = QuadExt(d)
    rng = random.Random(d)
    for _ in range(40):
        n = rng.randint(1, 4)
        g = random_hermitian(ext, n, rng)
        if g.is_degenerate():
            continue
        cls = classify_local(g, REAL)
        p, q = cls.signature
        assert p + q == n
        # disc has sign (-1)^(n(n-1)/2 + q) and omega at the real place is that sign
        assert cls.sign == (-1) ** ((n * (n - 1) // 2 + q) % 2)


def test_validate_examples():
    one = GlobalSpaceDescriptor(GAUSS, 1).with_signs({"3": -1})
    rep = validate_global(one)
    assert not rep.ok and rep.violations[0].startswith("product_formula")
    assert validate_global(GlobalSpaceDescriptor(GAUSS, 3).with_signs({"3": -1, "7": -1})).ok
    split = validate_global(GlobalSpaceDescriptor(GAUSS, 3).with_signs({"5": -1, "3": -1}))
    assert any(v.startswith("split_place") for v in split.violations)


def test_gram_descriptor_is_valid():
    rng = random.Random(3)
    for d in (-1, -3, 2, 5):
        ext = QuadExt(d)
        for _ in range(20):
            g = random_hermitian(ext, rng.randint(1, 3), rng)
            if not g.is_degenerate():
                assert validate_global(GlobalSpaceDescriptor.from_gram(g)).ok


def test_flip_two_places():
    base = GlobalSpaceDescriptor(GAUSS, 3)
    f = flip_two_places(base, 3, 7)
    assert f.deviations == {Place(3), Place(7)}
    assert validate_global(f).ok
    assert flip_two_places(f, 3, 7) == base
    with pytest.raises(ValueError):
        flip_two_places(base, 5, 3)
    with pytest.raises(ValueError):
        flip_two_places(base, 3, 3)


def test_descriptor_json_roundtrip():
    desc = GlobalSpaceDescriptor(GAUSS, 1, "skew", E(0, 2)).with_signs({"3": -1, "infty": -1})
    obj = desc.to_json()
    assert obj == {"d": -1, "dim": 1, "kind": "skew", "delta": ["0", "2"], "signs": {"infty": "-1", "3": "-1"}}
    assert GlobalSpaceDescriptor.from_json(obj) == desc


def test_gram_json_roundtrip():
    g = GramMatrix(GAUSS, 1, ((2, E(1, 1)), (E(1, -1), Fraction(1, 3))))
    assert GramMatrix.from_json(g.to_json()) == g


def test_skew_descriptor_has_inferred_note():
    rep = validate_global(GlobalSpaceDescriptor(GAUSS, 1, "skew", E(0, 1)))
    assert rep.ok and rep.notes


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([-1, -3, 2, 5, -5]),
    st.sets(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19]), max_size=5),
    st.booleans(),
)
def test_valid_iff_even_and_nonsplit(d, primes, with_real):
    ext = QuadExt(d)
    devs = {Place(p) for p in primes} | ({REAL} if with_real else set())
    desc = GlobalSpaceDescriptor(ext, 2, deviations=frozenset(devs))
    expected = len(devs) % 2 == 0 and all(place_behavior(ext, v) != "split" for v in devs)
    assert validate_global(desc).ok == expected
