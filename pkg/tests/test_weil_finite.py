import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from oracles import heisenberg_trace
from thetakit.exact_arith import Cyclotomic
from thetakit.weil_finite import (
    ExactOperator,
    FiniteSymplectic,
    HeisenbergElement,
    act,
    canonical_operator,
    canonical_word,
    cocycle,
    even_odd_split,
    generator,
    h_inv,
    h_mul,
    intertwiner,
    nonsplit_torus_theta,
    parity_operator,
    random_sl2_word,
    rho,
    svn_check,
    word_matrix,
    word_operator,
)


def H(*w, t=0):
    return HeisenbergElement(w, t)


def gens_for(fs):
    eye = np.eye(fs.n, dtype=int)
    out = [generator(fs, "w"), generator(fs, "n", eye), generator(fs, "m", 2 * eye)]
    for a in range(1, fs.q):
        out.append(generator(fs, "m", a * eye))
        out.append(generator(fs, "n", a * eye))
    if fs.n == 2:
        out += [generator(fs, "m", [[1, 1], [0, 1]]), generator(fs, "n", [[0, 1], [1, 0]])]
    return out


def test_field_restrictions():
    for bad in (2, 4, 9):
        with pytest.raises(ValueError):
            FiniteSymplectic(bad)


def test_group_law_examples():
    fs = FiniteSymplectic(3)
    assert h_mul(fs, H(1, 2), H(2, 1)) == H(0, 0)
    a, b = H(1, 0), H(0, 1)
    comm = h_mul(fs, h_mul(fs, a, b), h_mul(fs, h_inv(fs, a), h_inv(fs, b)))
    assert comm.w == (0, 0) and comm.t == fs.form(a.w, b.w)


def test_group_axioms_exhaustive_q3():
    fs = FiniteSymplectic(3)
    els = list(fs.elements())
    assert len(els) == 27
    e = H(0, 0)
    center = [x for x in els if all(h_mul(fs, x, y) == h_mul(fs, y, x) for y in els)]
    assert len(center) == 3
    for a in els:
        assert h_mul(fs, a, e) == a == h_mul(fs, e, a)
        assert h_mul(fs, a, h_inv(fs, a)) == e
        assert h_mul(fs, a, h_mul(fs, a, a)) == e  # exponent 3
        for b in els:
            ab = h_mul(fs, a, b)
            for c in els:
                assert h_mul(fs, ab, c) == h_mul(fs, a, h_mul(fs, b, c))


@pytest.mark.parametrize("q", [5, 7])
def test_group_axioms_sampled(q):
    fs = FiniteSymplectic(q)
    rng = random.Random(q)
    for _ in range(10**4):
        a, b, c = (H(rng.randrange(q), rng.randrange(q), t=rng.randrange(q)) for _ in range(3))
        assert h_mul(fs, h_mul(fs, a, b), c) == h_mul(fs, a, h_mul(fs, b, c))


def test_rho_examples():
    fs = FiniteSymplectic(5)
    I = ExactOperator.identity(5, 5)
    assert rho(fs, H(0, 0, t=1)) == I.scale(Cyclotomic.zeta(5))
    T = rho(fs, H(0, 1))
    assert T.power(5) == I and T != I
    assert np.count_nonzero(T.coeffs.sum(axis=0)) == 5  # permutation


def test_rho_homomorphism_exhaustive_q3():
    fs = FiniteSymplectic(3)
    els = list(fs.elements())
    mats = {h: rho(fs, h) for h in els}
    for a in els:
        for b in els:
            assert mats[a] @ mats[b] == mats[h_mul(fs, a, b)]


@pytest.mark.parametrize("q,n", [(3, 1), (5, 1), (3, 2)])
def test_traces_match_formula(q, n):
    fs = FiniteSymplectic(q, n)
    for h in fs.elements():
        c, e = heisenberg_trace(q, n, h.w, h.t)
        assert rho(fs, h).trace() == Cyclotomic.zeta(q, e) * c


@pytest.mark.parametrize("q,n", [(3, 1), (5, 1)])
def test_rho_unitary(q, n):
    fs = FiniteSymplectic(q, n)
    I = ExactOperator.identity(q, q**n)
    for h in fs.elements():
        M = rho(fs, h)
        assert M @ M.adjoint() == I


@pytest.mark.parametrize("q,n", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_stone_von_neumann(q, n):
    r = svn_check(FiniteSymplectic(q, n))
    assert r["inner_product"] == 1 and r["irreducible"]
    assert r["orthogonal"]


def test_svn_size_limit():
    with pytest.raises(ValueError):
        svn_check(FiniteSymplectic(3, 6))


def test_n_zero_is_identity():
    fs = FiniteSymplectic(5)
    assert intertwiner(fs, generator(fs, "n", [[0]])) == ExactOperator.identity(5, 5)


def test_fourier_square_is_q_times_parity():
    for q, n in [(3, 1), (5, 1), (3, 2)]:
        fs = FiniteSymplectic(q, n)
        F = intertwiner(fs, ("w",))
        assert F @ F == parity_operator(fs).scale(q**n)
        assert F @ F.adjoint() == ExactOperator.identity(q, q**n).scale(q**n)


def test_generator_validation():
    fs = FiniteSymplectic(3, 2)
    with pytest.raises(ValueError):
        generator(fs, "m", [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        generator(fs, "n", [[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        generator(fs, "x")


@pytest.mark.parametrize("q", [3, 5])
def test_intertwining_exhaustive(q):
    fs = FiniteSymplectic(q)
    els = list(fs.elements())
    mats = {h: rho(fs, h) for h in els}
    for g in gens_for(fs):
        A = intertwiner(fs, g)
        G = word_matrix(fs, [g])
        for h in els:
            assert A @ mats[h] == mats[act(fs, G, h)] @ A, (g, h)


def test_intertwining_m_on_y():
    # m(a) acts on Y by a^-T, so A rho(0, y) A^-1 = rho(0, a^-1 y) when n = 1
    fs = FiniteSymplectic(5)
    A = intertwiner(fs, generator(fs, "m", [[2]]))
    Ainv = intertwiner(fs, generator(fs, "m", [[3]]))
    assert A @ Ainv == ExactOperator.identity(5, 5)
    assert A @ rho(fs, H(0, 1)) @ Ainv == rho(fs, H(0, 3))


def test_intertwining_sampled_n2():
    fs = FiniteSymplectic(3, 2)
    rng = random.Random(0)
    els = list(fs.elements())
    for g in gens_for(fs):
        A = intertwiner(fs, g)
        G = word_matrix(fs, [g])
        for h in rng.sample(els, 40):
            assert A @ rho(fs, h) == rho(fs, act(fs, G, h)) @ A


def test_canonical_word_reproduces_matrix():
    fs = FiniteSymplectic(5)
    count = 0
    for a, b, c, d in product(range(5), repeat=4):
        if (a * d - b * c) % 5 != 1:
            continue
        g = np.array([[a, b], [c, d]])
        assert np.array_equal(word_matrix(fs, canonical_word(fs, g)), g)
        count += 1
    assert count == 120


def test_cocycle_identity_and_fourier():
    fs = FiniteSymplectic(3)
    w = [("w",)]
    assert cocycle(fs, [("n", ((0,),))], w) == 1
    lam = cocycle(fs, w, w)
    assert lam == 3 and (lam * lam.conj()) == 9


def test_cocycle_random_pairs_q3():
    fs = FiniteSymplectic(3)
    rng = random.Random(11)
    for _ in range(100):
        lam = cocycle(fs, random_sl2_word(fs, rng), random_sl2_word(fs, rng))
        assert not lam.is_zero()


def test_cocycle_n2():
    fs = FiniteSymplectic(3, 2)
    w1 = [generator(fs, "w"), generator(fs, "n", [[1, 0], [0, 2]])]
    w2 = [generator(fs, "m", [[1, 1], [0, 1]]), generator(fs, "w")]
    assert not cocycle(fs, w1, w2).is_zero()


def test_canonical_operator_n2_intertwines():
    fs = FiniteSymplectic(3, 2)
    g = word_matrix(fs, [generator(fs, "w"), generator(fs, "n", [[1, 1], [1, 0]])])
    A = canonical_operator(fs, g)
    for h in random.Random(1).sample(list(fs.elements()), 20):
        assert A @ rho(fs, h) == rho(fs, act(fs, g, h)) @ A


@pytest.mark.parametrize("q,n", [(3, 1), (7, 1), (5, 1), (3, 2)])
def test_even_odd(q, n):
    fs = FiniteSymplectic(q, n)
    out = even_odd_split(fs, operators=[intertwiner(fs, g) for g in gens_for(fs)])
    m = q**n
    assert out["dims"] == ((m + 1) // 2, (m - 1) // 2)
    assert out["invariant"]
    plus, minus = out["projectors"]
    F = intertwiner(fs, ("w",))
    assert plus @ F @ minus == ExactOperator(q, np.zeros((q, m, m), dtype=np.int64))
    Z = rho(fs, HeisenbergElement((0,) * 2 * n, 1))
    assert plus @ Z == Z @ plus


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_torus(q):
    out = nonsplit_torus_theta(q)
    mult = out["multiplicities"]
    assert len(mult) == q + 1
    assert set(mult.values()) <= {0, 1}
    assert out["dimension"] == sum(mult.values()) == q
    assert len(out["missing"]) == 1
    assert sum(out["even"].values()) == (q + 1) // 2
    assert sum(out["odd"].values()) == (q - 1) // 2
    for j in mult:
        assert out["even"][j] + out["odd"][j] == mult[j]


def test_torus_q3_has_three_characters():
    out = nonsplit_torus_theta(3)
    assert sum(1 for v in out["multiplicities"].values() if v) == 3


def test_exact_operator_overflow_guard():
    q, m = 3, 2
    big = np.zeros((q, m, m), dtype=np.int64)
    big[0] = [[2**40, 1], [0, 2**40]]
    A = ExactOperator(q, big)
    B = A @ A @ A
    assert int(B.coeffs[0, 0, 0]) == 2**120


def test_exact_operator_fraction_scale():
    I = ExactOperator.identity(5, 3)
    half = I.scale(Fraction(1, 2))
    assert half + half == I
    assert half.entry(0, 0) == Fraction(1, 2)


def test_dump_format():
    fs = FiniteSymplectic(3)
    rows = intertwiner(fs, ("w",)).to_rows()
    assert len(rows) == 3 and len(rows[0]) == 3 and len(rows[0][0]) == 3
    assert rows[0][0] == [[1, 1], [0, 1], [0, 1]]


def test_word_operator_linear_torus_order():
    fs = FiniteSymplectic(5)
    w = [("w",), ("n", ((1,),))]
    A = word_operator(fs, w, linear=True)
    assert A.power(3) == ExactOperator.identity(5, 5)
