import random

import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from gorcert.fields import GF, QQ, FieldSpec, FieldError
from gorcert.linalg import (ExactMatrix, Subspace, rref, solve, kernel_matrix,
                            hstack, vfrom)

GF5 = GF(5)
GF2 = GF(2)
GF101 = GF(101)


def test_field_validation():
    with pytest.raises(FieldError):
        FieldSpec.prime(6)
    with pytest.raises(FieldError):
        FieldSpec.prime(1)
    assert GF(2).characteristic == 2
    assert QQ.characteristic == 0


@pytest.mark.parametrize("field", [GF5, GF101, QQ])
def test_field_axioms_randomized(field):
    rng = random.Random(11)
    for _ in range(200):
        a, b, c = (field.rand(rng) for _ in range(3))
        assert field.add(a, b) == field.add(b, a)
        assert field.mul(a, b) == field.mul(b, a)
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        assert field.add(a, field.neg(a)) == field.zero()
        if not field.is_zero(a):
            assert field.mul(a, field.inv(a)) == field.one()


def test_rref_identity():
    m = ExactMatrix.identity(GF5, 3)
    r, rank, piv = rref(m)
    assert r == m and rank == 3 and piv == [0, 1, 2]


def test_rref_zero():
    m = ExactMatrix.zeros(QQ, 2, 4)
    r, rank, piv = rref(m)
    assert r == m and rank == 0 and piv == []


def test_rref_with_recorded_operations():
    # the transform matrix T recording the row operations must satisfy
    # T @ M == R and be invertible, so R is honestly row-equivalent to M.
    # Over Q the matrix [[1,2,3],[2,4,1]] has rank 2 with pivots {0, 2};
    # over GF(5) the second row is 2x the first, so the rank drops to 1.
    m = ExactMatrix.from_rows(QQ, [[1, 2, 3], [2, 4, 1]])
    r, rank, piv, t = rref(m, transform=True)
    assert rank == 2
    assert piv == [0, 2]
    assert t.matmul(m) == r
    _, trank, _ = rref(t)
    assert trank == t.rows

    m5 = ExactMatrix.from_rows(GF5, [[1, 2, 3], [2, 4, 1]])
    r5, rank5, piv5, t5 = rref(m5, transform=True)
    assert rank5 == 1 and piv5 == [0]
    assert t5.matmul(m5) == r5
    assert rref(t5)[1] == t5.rows


def _random_matrix(field, rng, rows, cols):
    return ExactMatrix.from_rows(
        field, [[field.rand(rng) for _ in range(cols)] for _ in range(rows)], cols)


@pytest.mark.parametrize("field", [GF5, GF101, QQ])
def test_rref_idempotent_random(field):
    rng = random.Random(7)
    for _ in range(25):
        m = _random_matrix(field, rng, rng.randrange(1, 6), rng.randrange(1, 6))
        r, rank, piv = rref(m)
        r2, rank2, piv2 = rref(r)
        assert r2 == r and rank2 == rank and piv2 == piv


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=5))
@settings(deadline=None, max_examples=60)
def test_rref_idempotent_hypothesis(rows):
    m = ExactMatrix.from_rows(QQ, rows, 3)
    r, rank, piv = rref(m)
    assert rref(r)[0] == r
    # pivot columns strictly increasing, leading entries 1
    assert piv == sorted(piv)
    for k, pc in enumerate(piv):
        assert r.entry(k, pc) == 1


def test_solve_identity():
    b = ExactMatrix.from_rows(QQ, [[3], [4]])
    x, ker = solve(ExactMatrix.identity(QQ, 2), b)
    assert x == b
    assert ker.dim == 0


def test_solve_zero_matrix():
    a = ExactMatrix.zeros(QQ, 2, 3)
    b = ExactMatrix.zeros(QQ, 2, 1)
    x, ker = solve(a, b)
    assert x == ExactMatrix.zeros(QQ, 3, 1)
    assert ker.dim == 3


def test_solve_inconsistent():
    a = ExactMatrix.from_rows(QQ, [[1, 1], [1, 1]])
    b = ExactMatrix.from_rows(QQ, [[1], [2]])
    x, ker = solve(a, b)
    assert x is None
    assert ker.dim == 1


@pytest.mark.parametrize("field", [GF5, QQ, GF2])
def test_solve_round_trip_random(field):
    rng = random.Random(23)
    for _ in range(40):
        rows, cols = rng.randrange(1, 6), rng.randrange(1, 6)
        a = _random_matrix(field, rng, rows, cols)
        xtrue = _random_matrix(field, rng, cols, 1)
        b = a.matmul(xtrue)
        x, ker = solve(a, b)
        assert x is not None
        assert a.matmul(x) == b
        # kernel vectors really solve the homogeneous system
        for i in range(ker.dim):
            v = ker.basis.row(i)
            col = ExactMatrix.from_rows(field, [[c] for c in v])
            assert a.matmul(col).is_zero()


def test_subspace_equal_sum_intersection():
    u = Subspace.from_vectors(GF2, 4, [[1, 0, 1, 0], [0, 1, 0, 0]])
    v = Subspace.from_vectors(GF2, 4, [[0, 1, 0, 0], [1, 0, 1, 0]])
    assert u == v
    assert u.sum(v) == u
    assert u.intersect(v) == u


def test_subspace_complementary_coordinates_gf2():
    u = Subspace.from_vectors(GF2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    v = Subspace.from_vectors(GF2, 4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert u.sum(v).dim == 4
    assert u.intersect(v).dim == 0


def _rank_oracle(field, vec_lists, ambient):
    if not vec_lists:
        return 0
    return rref(ExactMatrix.from_rows(field, vec_lists, ambient))[1]


@pytest.mark.parametrize("field", [QQ, GF5])
def test_dimension_formula_random(field):
    # dim U + dim V == dim(U+V) + dim(U cap V), oracle via ranks of stacked bases
    rng = random.Random(42)
    for _ in range(30):
        amb = 5
        uvecs = [[field.rand(rng) for _ in range(amb)] for _ in range(3)]
        vvecs = [[field.rand(rng) for _ in range(amb)] for _ in range(3)]
        u = Subspace.from_vectors(field, amb, uvecs)
        v = Subspace.from_vectors(field, amb, vvecs)
        s = u.sum(v)
        i = u.intersect(v)
        assert u.dim + v.dim == s.dim + i.dim
        assert s.dim == _rank_oracle(field, uvecs + vvecs, amb)
        assert s.contains_subspace(u) and s.contains_subspace(v)
        assert u.contains_subspace(i) and v.contains_subspace(i)


def test_quotient_map_kernel():
    u = Subspace.from_vectors(QQ, 4, [[1, 2, 0, 1], [0, 0, 1, 3]])
    q = u.quotient_map()
    assert q.rows == 2
    for i in range(u.dim):
        col = ExactMatrix.from_rows(QQ, [[c] for c in u.basis.row(i)])
        assert q.matmul(col).is_zero()
    # vectors outside u map to nonzero
    w = vfrom(QQ, [1, 0, 0, 0])
    assert not u.contains(w)
    col = ExactMatrix.from_rows(QQ, [[c] for c in w])
    assert not q.matmul(col).is_zero()


def test_kernel_matrix_is_rref():
    m = ExactMatrix.from_rows(QQ, [[1, 1, 0], [0, 0, 0]])
    k = kernel_matrix(m)
    r, rank, piv = rref(k)
    assert k == r and rank == k.rows
