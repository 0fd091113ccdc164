import random
from math import comb

import pytest

from gorcert.fields import GF, QQ
from gorcert.linalg import Subspace, vis_zero, veq
from gorcert.rings import (GradedRing, RingElement, build_quotient,
                           build_pairing, PairingError, TruncationError)
from gorcert.ideals import (HomogeneousIdeal, gorenstein_from_dual_form,
                            inverse_system_pieces, catalecticant)
from gorcert.linalg import rref

GF101 = GF(101)


def ring_kxy(field=QQ, trunc=6):
    return GradedRing(field, ("x", "y"), trunc)


def monomial_ideal_pieces(ring, gens):
    """Subspaces of the ideal generated by monomials (as exp tuples)."""
    ideal = HomogeneousIdeal.from_generators(
        ring, [(sum(g), ring.mono_vec(g)) for g in gens])
    return ideal.pieces


def test_monomial_dimensions():
    r = GradedRing(QQ, ("x", "y", "z"), 8)
    for d in range(9):
        assert len(r.monomials(d)) == comb(2 + d, d) == r.dim(d)


def test_monomial_order_graded_lex():
    r = GradedRing(QQ, ("x", "y", "z"), 4)
    assert r.monomials(2) == [(2, 0, 0), (1, 1, 0), (1, 0, 1),
                              (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def test_ring_multiplication_commutative_associative():
    r = GradedRing(GF101, ("x", "y", "z"), 9)
    rng = random.Random(5)
    for _ in range(20):
        d1, d2, d3 = (rng.randrange(0, 3) for _ in range(3))
        a = RingElement.homogeneous(r, d1, [GF101.rand(rng) for _ in range(r.dim(d1))])
        b = RingElement.homogeneous(r, d2, [GF101.rand(rng) for _ in range(r.dim(d2))])
        c = RingElement.homogeneous(r, d3, [GF101.rand(rng) for _ in range(r.dim(d3))])
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


def test_quotient_complete_intersection_x2_y2():
    # S = k[x,y]/(x^2, y^2): HF = (1, 2, 1), Gorenstein, socle degree 2
    r = ring_kxy(QQ, 6)
    pieces = monomial_ideal_pieces(r, [(2, 0), (0, 2)])
    S = build_quotient(r, pieces)
    assert S.hilbert_function == (1, 2, 1)
    assert S.socle_degree == 2
    assert S.is_gorenstein
    # x*y = xy, x*x = 0
    x = S.element_from_poly(1, r.mono_vec((1, 0)))
    y = S.element_from_poly(1, r.mono_vec((0, 1)))
    xy = x * y
    assert not xy.is_zero()
    assert (x * x).is_zero()
    one = RingElement.one(S)
    assert (x * one) == x


def test_quotient_power_of_maximal_ideal():
    # S = k[x,y,z]/M^5: not Gorenstein, socle dim 15 in degree 4
    r = GradedRing(GF101, ("x", "y", "z"), 8)
    gens = [m for m in r.monomials(5)]
    pieces = monomial_ideal_pieces(r, gens)
    S = build_quotient(r, pieces)
    assert S.hilbert_function == (1, 3, 6, 10, 15)
    assert not S.is_gorenstein
    assert sum(S.socle_dims()) == 15


def test_truncation_too_small():
    r = ring_kxy(QQ, 5)
    pieces = monomial_ideal_pieces(r, [(4, 0), (0, 4)])  # socle degree 6 > 5
    with pytest.raises(TruncationError):
        build_quotient(r, pieces)


def test_generic_octic_inverse_system_hilbert_function():
    # A = Ann(F), F a generic degree-8 dual form in 3 variables:
    # symmetric HF (1,3,6,10,15,10,6,3,1).  Oracle: catalecticant ranks.
    r = GradedRing(GF101, ("x", "y", "z"), 12)
    rng = random.Random(7)
    fvec = [GF101.rand(rng) for _ in range(r.dim(8))]
    S = gorenstein_from_dual_form(r, 8, fvec)
    assert S.hilbert_function == (1, 3, 6, 10, 15, 10, 6, 3, 1)
    assert S.is_gorenstein
    assert S.socle_degree == 8
    for d in range(9):
        cat = catalecticant(r, 8, fvec, d)
        assert rref(cat)[1] == S.hilbert_function[d]


def test_inverse_system_divided_square():
    # F = x^[2]y^[2] gives Ann(F) = (x^3, y^3); oracle: contraction kernel
    r = ring_kxy(QQ, 6)
    fvec = r.mono_vec((2, 2))
    S = gorenstein_from_dual_form(r, 4, fvec)
    assert S.hilbert_function == (1, 2, 3, 2, 1)
    expected = HomogeneousIdeal.from_generators(
        r, [(3, r.mono_vec((3, 0))), (3, r.mono_vec((0, 3)))])
    got = HomogeneousIdeal(r, inverse_system_pieces(r, 4, fvec), valid_to=r.trunc)
    assert got == expected


def test_generic_binary_cubic_hf():
    r = ring_kxy(GF101, 6)
    rng = random.Random(3)
    fvec = [GF101.rand(rng) for _ in range(r.dim(3))]
    S = gorenstein_from_dual_form(r, 3, fvec)
    assert S.hilbert_function == (1, 2, 2, 1)


def test_pairing_one_variable():
    # S = k[x]/(x^3): the dual of x is forced by x * alpha_x = socle gen
    r = GradedRing(QQ, ("x",), 5)
    pieces = monomial_ideal_pieces(r, [(3,)])
    S = build_quotient(r, pieces)
    pairing = build_pairing(S)
    assert pairing.covered >= 1
    ax = pairing.alpha((1,))
    x = S.reduce_vec(1, r.mono_vec((1,)))
    prod = S.component_product(x, 1, ax, S.socle_degree - 1)
    assert veq(QQ, prod, S.socle_generator_vec())


def test_pairing_divisibility_relations_degree8():
    # in the generic degree-8 fixture over GF(101): for degree-3 monomials m
    # and variables x', the product x'_bar * alpha_m is alpha_{m/x'} when x'
    # divides m and 0 otherwise -- checked for all 3 x 10 pairs.
    from gorcert.rings import mono_divides, mono_div
    r = GradedRing(GF101, ("x", "y", "z"), 12)
    rng = random.Random(7)
    fvec = [GF101.rand(rng) for _ in range(r.dim(8))]
    S = gorenstein_from_dual_form(r, 8, fvec)
    pairing = build_pairing(S)
    assert pairing.covered == 3
    s = S.socle_degree
    checked = 0
    for m in r.monomials(3):
        am = pairing.alpha(m)
        for v in range(3):
            var = tuple(1 if i == v else 0 for i in range(3))
            xv = S.reduce_vec(1, r.mono_vec(var))
            prod = S.component_product(xv, 1, am, s - 3)
            if mono_divides(var, m):
                want = pairing.alpha(mono_div(m, var))
            else:
                want = S.zero_vec(s - 2)
            assert veq(GF101, prod, want)
            checked += 1
    assert checked == 30
    # x_bar * alpha_{x^3} = alpha_{x^2}
    ax3 = pairing.alpha((3, 0, 0))
    xbar = S.reduce_vec(1, r.mono_vec((1, 0, 0)))
    assert veq(GF101, S.component_product(xbar, 1, ax3, s - 3),
               pairing.alpha((2, 0, 0)))


def test_pairing_duality_of_dimensions():
    r = GradedRing(GF101, ("x", "y", "z"), 12)
    rng = random.Random(7)
    fvec = [GF101.rand(rng) for _ in range(r.dim(8))]
    S = gorenstein_from_dual_form(r, 8, fvec)
    s = S.socle_degree
    for i in range(s + 1):
        assert S.dim(i) == S.dim(s - i)


def test_pairing_rejects_non_gorenstein():
    r = GradedRing(QQ, ("x", "y"), 5)
    pieces = monomial_ideal_pieces(r, [(2, 0), (1, 1), (0, 2)])
    S = build_quotient(r, pieces)
    assert not S.is_gorenstein
    with pytest.raises(PairingError):
        build_pairing(S)
