import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kfchiral.chirality import (
    ChiralityPoint,
    GeneralizedSystem,
    T,
    act_point,
    chirality_product,
    commute_witness_ch,
    determinant_image,
    generalized_point,
    monomial_system,
    pi_point,
    pluecker_polys,
    pullback_act_point,
    sign_identity_exhaustive,
    sign_identity_holds,
    signed_lookup,
    tau_point,
    vandermonde_point,
)
from kfchiral.perm import Permutation, all_permutations
from kfchiral.poly import Poly, subsetvar

from conftest import to_sympy


def y(*J):
    return Poly.var(subsetvar(J))


def permute_x(g, x):
    gx = [None] * len(x)
    for i in range(1, len(x) + 1):
        gx[g(i) - 1] = x[i - 1]
    return gx


def test_vandermonde_examples():
    Y = vandermonde_point([0, 1, 2], 2)
    assert (Y[1, 2], Y[1, 3], Y[2, 3]) == (-1, -2, -1)
    Y = vandermonde_point([5, 5, 1], 2)
    assert Y[1, 2] == 0
    assert vandermonde_point([0, 1, 2, 3], 4)[1, 2, 3, 4] == 12
    assert chirality_product([0, 1, 2, 3]) == 12
    assert chirality_product([1, 2, 1, 7]) == 0
    with pytest.raises(ValueError):
        vandermonde_point([1, 2], 3)


def test_generalized_point_examples():
    x = [Fraction(1, 2), 3, -2]
    G = generalized_point(x, monomial_system(2))
    for J in G.subsets():
        assert G[J] == x[J[1] - 1] - x[J[0] - 1]
    G = generalized_point([1, 4, 4, 0], GeneralizedSystem((Poly.const(1), Poly.var(T) ** 3, Poly.var(T))))
    assert G[1, 2, 3] == 0 and G[2, 3, 4] == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_determinant_form_differs_by_global_sign(k):
    rng = random.Random(k)
    x = [rng.randint(-9, 9) for _ in range(6)]
    V, G = vandermonde_point(x, k), generalized_point(x, monomial_system(k))
    s = (-1) ** (k * (k - 1) // 2)
    assert all(G[J] == s * V[J] for J in V.subsets())


def test_signed_lookup():
    Y = vandermonde_point([0, 1, 2], 2)
    assert signed_lookup(Y, (1, 2)) == Y[1, 2]
    assert signed_lookup(Y, (2, 1)) == -Y[1, 2]
    assert signed_lookup(Y, (1, 1)) == 0


def test_pluecker_examples():
    assert pluecker_polys(4, 1) == []
    rels = pluecker_polys(4, 2)
    expected = y(1, 2) * y(3, 4) - y(1, 3) * y(2, 4) + y(1, 4) * y(2, 3)
    assert len(rels) == 1 and rels[0] in (expected, -expected)
    assert len(pluecker_polys(5, 2)) == 5


def test_pluecker_vanish_on_sympy_minors():
    """Independent route: substitute 2x2 minors of a symbolic 2x5 matrix in sympy."""
    M = sympy.Matrix(2, 5, lambda p, j: sympy.Symbol(f"m{p}{j}"))
    minors = {sympy.Symbol(str(subsetvar(J))): M[:, [J[0] - 1, J[1] - 1]].det() for J in itertools.combinations(range(1, 6), 2)}
    for rel in pluecker_polys(5, 2):
        assert sympy.expand(to_sympy(rel).subs(minors, simultaneous=True)) == 0


def test_det_substitution_examples():
    three = y(1, 2) * y(3, 4) - y(1, 3) * y(2, 4) + y(1, 4) * y(2, 3)
    assert determinant_image(three, 2).is_zero()
    assert len(determinant_image(y(1, 2), 2)) == 2
    assert not determinant_image(y(1, 2) * y(3, 4) + y(1, 3) * y(2, 4), 2).is_zero()
    with pytest.raises(ValueError):
        determinant_image(y(1, 2, 3), 2)


def test_act_point_examples():
    Y = vandermonde_point([3, 7, 1], 2)
    assert act_point(Permutation.identity(3), Y) == Y
    Z = ChiralityPoint(2, 2, {(1, 2): 5})
    assert act_point(Permutation.transposition(2, 1, 2), Z)[1, 2] == -5
    swap = Permutation.transposition(2, 1, 2)
    assert act_point(swap, vandermonde_point([0, 1], 2))[1, 2] == 1 == vandermonde_point(permute_x(swap, [0, 1]), 2)[1, 2]


def test_pullback_is_inverse_action():
    Y = vandermonde_point([3, 7, 1, -2], 2)
    for g in all_permutations(4):
        assert pullback_act_point(g, Y) == act_point(g.inverse(), Y)


@given(
    st.integers(2, 4).flatmap(
        lambda k: st.tuples(
            st.just(k),
            st.integers(k, 7).flatmap(
                lambda n: st.tuples(st.permutations(list(range(1, n + 1))), st.lists(st.integers(-30, 30), min_size=n, max_size=n))
            ),
        )
    )
)
@settings(max_examples=150)
def test_equivariance_property(data):
    k, (images, x) = data
    g = Permutation(tuple(images))
    assert act_point(g, vandermonde_point(x, k)) == vandermonde_point(permute_x(g, x), k)


def test_sign_identity_examples():
    g = Permutation.cycle(3, 1, 2, 3)
    assert sign_identity_holds(g, (1, 3))
    assert sign_identity_exhaustive(4, 2) == (24 * 6, 0)


def test_tau_pi_examples():
    Y = vandermonde_point([0, 1, 2], 2)
    assert tau_point(Y, 3) == Y
    t = tau_point(Y, 4)
    assert [t[J] for J in t.subsets()] == [-1, -2, -2, -1, -1, 0]
    assert pi_point(t, 3) == Y
    assert pi_point(Y, 3) == Y
    with pytest.raises(ValueError):
        pi_point(Y, 1)
    with pytest.raises(ValueError):
        tau_point(Y, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tau_is_repeating_the_last_ligand(k):
    rng = random.Random(k)
    for n in range(k, 6):
        x = [rng.randint(-9, 9) for _ in range(n)]
        for q in range(n, 7):
            assert tau_point(vandermonde_point(x, k), q) == vandermonde_point(x + [x[-1]] * (q - n), k)
        for m in range(k, n + 1):
            assert pi_point(vandermonde_point(x, k), m) == vandermonde_point(x[:m], k)


def _vandermonde_sides(w, x):
    """Independent check of a witness on a Vandermonde point, via ligand values only.

    The pullback of g sends V(x) to V(x o g), so each map acts on x directly.
    """
    n = len(x)
    X_q = x + [x[-1]] * (w.q - n)
    lhs = [X_q[w.g(i) - 1] for i in range(1, w.m + 1)]
    x1 = [x[w.g_prime(i) - 1] for i in range(1, n + 1)][: w.p]
    x1 = x1 + [x1[-1]] * (w.m - w.p)
    rhs = [x1[w.g_dprime(i) - 1] for i in range(1, w.m + 1)]
    return vandermonde_point(lhs, w.k), vandermonde_point(rhs, w.k)


def test_commute_examples():
    w = commute_witness_ch(4, 4, 2, Permutation.identity(4), 2)
    assert (w.p, w.g_prime.is_identity(), w.g_dprime.is_identity()) == (2, True, True)
    w = commute_witness_ch(4, 3, 3, Permutation.transposition(4, 3, 4), 2)
    assert w.L == (1, 2) and w.p == 3 and w.g_prime.is_identity() and w.g_dprime.is_identity()
    rng = np.random.default_rng(1)
    for _ in range(10):
        g = Permutation(tuple(int(i) + 1 for i in rng.permutation(6)))
        w = commute_witness_ch(6, 4, 3, g, 2)
        assert w.verified
        lhs, rhs = _vandermonde_sides(w, [int(v) for v in rng.integers(-20, 20, 4)])
        assert lhs == rhs


def test_commute_rejects_bad_levels():
    with pytest.raises(ValueError):
        commute_witness_ch(4, 3, 2, Permutation.identity(4), 3)
