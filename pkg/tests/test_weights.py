from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import weyl_dimension
from thetakit.weights import (
    A1,
    A1xA1,
    A2,
    C2,
    G2,
    G2_TO_SL2xSL2,
    G2_TO_SL3,
    ONE,
    FormalCharacter,
    LocalParameter,
    Phase,
    char_ops,
    decompose,
    g2_root_data,
    hps_local_parameter,
    irreducible_character,
    is_tempered,
    outer_product,
    satake_from_weights,
    satake_of_parameter,
    sk_local_parameter,
    verify_g2_branchings,
    verify_sp4_branching,
)


def std2():
    return irreducible_character(A1, (1,))


def test_g2_roots():
    data = g2_root_data()
    assert len(data["roots"]) == 12 and len(data["long"]) == 6 and len(data["short"]) == 6
    a, b = data["orthogonal_pair"]
    assert G2.pair(a, b) == 0
    assert a in data["long"] and b in data["short"]


def test_long_roots_form_a2():
    long_ = g2_root_data()["long"]
    # cosines between distinct long roots of A2 are +-1/2 or -1
    cos = {G2.pair(x, y) / G2.pair(x, x) for x in long_ for y in long_ if x != y}
    assert cos == {Fraction(1, 2), Fraction(-1, 2), Fraction(-1)}


def test_g2_gram_in_root_coordinates():
    a1, a2 = G2.simple_roots
    assert [[G2.pair(a1, a1), G2.pair(a1, a2)], [G2.pair(a2, a1), G2.pair(a2, a2)]] == [[2, -3], [-3, 6]]


def test_sym_and_tensor_of_std2():
    s2 = char_ops(std2(), None, ("sym", 2))
    assert sorted(w[0] for w in s2.weights()) == [-2, 0, 2]
    t = char_ops(std2(), std2(), "tensor")
    assert sorted(w[0] for w in t.weights()) == [-2, 0, 0, 2]
    s3 = std2().sym(3)
    assert s3 == irreducible_character(A1, (3,))
    assert sorted(w[0] for w in s3.weights()) == [-3, -1, 1, 3]


def test_char_ops_dispatch():
    s = std2()
    assert char_ops(s, s, "direct_sum").dim == 4
    assert char_ops(s, None, "dual") == s
    std3 = irreducible_character(A2, (1, 0))
    assert char_ops(std3, None, "dual") == irreducible_character(A2, (0, 1))
    with pytest.raises(ValueError):
        char_ops(s, s, "wedge")


def test_restrict_shape_checked():
    with pytest.raises(ValueError):
        irreducible_character(G2, (1, 0)).restrict(((1,),), A1)


def test_lattice_mismatch_rejected():
    with pytest.raises(ValueError):
        irreducible_character(A2, (1, 0)) + irreducible_character(C2, (1, 0))


@pytest.mark.parametrize(
    "system,name",
    [(A2, "A2"), (C2, "C2"), (G2, "G2")],
)
def test_dimensions_match_weyl_formula(system, name):
    for a in range(3):
        for b in range(3):
            ch = irreducible_character(system, (a, b))
            assert ch.dim == weyl_dimension(name, a, b), (name, a, b)
            assert ch.is_weyl_invariant()


def test_small_g2_representations():
    assert irreducible_character(G2, (1, 0)).dim == 7
    assert irreducible_character(G2, (0, 1)).dim == 14
    seven = irreducible_character(G2, (1, 0))
    short = set(g2_root_data()["short"])
    assert set(seven.weights()) == short | {(0, 0)}


def test_g2_branchings():
    rep = verify_g2_branchings()
    assert rep["ok"]
    assert len(rep["checks"]) == 4
    assert all(c["ok"] for c in rep["checks"].values())
    dims = {k[0]: v["dims"][0] for k, v in rep["checks"].items()}
    assert dims == {"a": 7, "b": 7, "c": 14, "d": 14}
    assert rep["adjoint_zero_weight_multiplicity"] == 2
    assert rep["passing_conventions"] == ["long = std factor"]
    assert rep["convention_unique"]


def test_g2_branching_by_decomposition():
    # independent route: peel highest weights instead of comparing multisets
    adj = irreducible_character(G2, (0, 1))
    assert sorted(decompose(adj.restrict(G2_TO_SL3, A2)).elements()) == [(0, 1), (1, 0), (1, 1)]
    got = decompose(adj.restrict(G2_TO_SL2xSL2, A1xA1))
    assert sorted(got.elements()) == [(0, 2), (1, 3), (2, 0)]
    seven = decompose(irreducible_character(G2, (1, 0)).restrict(G2_TO_SL2xSL2, A1xA1))
    assert sorted(seven.elements()) == [(0, 2), (1, 1)]


def test_sp4_branching():
    rep = verify_sp4_branching()
    assert rep["ok"] and rep["dims"] == [3, 3, 4] and sum(rep["dims"]) == 10


def test_hps_satake():
    s = satake_of_parameter(hps_local_parameter(), 5)
    assert s.exponents() == [Fraction(1, 2), 0, Fraction(-1, 2)]
    assert not is_tempered(s)
    assert s.is_self_dual()


def test_tempered_parameter():
    p = LocalParameter((((ONE, Phase.named("a"), Phase.named("a", -1)), 1),))
    assert is_tempered(satake_of_parameter(p, 7))


def test_trivial_representation_not_tempered():
    s = satake_of_parameter(LocalParameter((((ONE,), 3),)), 5)
    assert s.exponents() == [1, 0, -1] and not is_tempered(s)


def test_sk_satake():
    alpha = Phase.named("alpha")
    s = satake_of_parameter(sk_local_parameter(alpha), 11)
    pairs = sorted((e, str(p)) for e, p in s.eigenvalues)
    assert pairs == [(Fraction(-1, 2), "1"), (0, "alpha"), (0, "alpha^-1"), (Fraction(1, 2), "1")]
    assert s.is_self_dual() and not is_tempered(s)


def test_satake_from_weights_g2_long():
    # 7-dim of G2 restricted, rho on the short factor and Arthur SL2 on the long one
    ch = irreducible_character(G2, (1, 0)).restrict(G2_TO_SL2xSL2, A1xA1)
    s = satake_from_weights(ch, rho_factor=1, rho_phase=Phase.named("a"), q=5)
    assert sorted(s.exponents()) == sorted([Fraction(1, 2)] * 2 + [Fraction(-1, 2)] * 2 + [0] * 3)
    assert s.is_self_dual()


def test_ramified_rejected():
    with pytest.raises(ValueError):
        satake_of_parameter(LocalParameter((((ONE,), 1),), ramified=True), 5)


small = st.integers(min_value=0, max_value=4)


@settings(max_examples=40, deadline=None)
@given(small, small, small, small)
def test_tensor_dimension_multiplies(a, b, c, d):
    x = irreducible_character(A2, (a, b))
    y = irreducible_character(A2, (c, d))
    assert (x * y).dim == x.dim * y.dim
    assert (x * y).is_weyl_invariant()
    assert x.dual().dual() == x


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=12))
def test_sym_of_std2_dimension(k):
    assert std2().sym(k).dim == k + 1


@settings(max_examples=20, deadline=None)
@given(small, small)
def test_outer_products_are_invariant(a, b):
    ch = outer_product(irreducible_character(A1, (a,)), irreducible_character(A1, (b,)))
    assert ch == irreducible_character(A1xA1, (a, b))
    assert ch.is_weyl_invariant()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(["alpha", "beta"]), max_size=2), st.integers(min_value=1, max_value=4))
def test_satake_self_dual_for_symplectic_blocks(names, r):
    phases = [ONE]
    for n in names:
        phases += [Phase.named(n), Phase.named(n, -1)]
    s = satake_of_parameter(LocalParameter(((tuple(phases), r),)), 3)
    assert s.is_self_dual()
