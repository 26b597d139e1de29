from fractions import Fraction

import pytest

from analysis.exact_linalg import (
    RationalMatrix, commutator, complement_pivots, det, full_space, inverse, is_subspace,
    kernel, rank, relative_dim, rref, span, subspace_intersection, subspace_sum,
)
from errors import DimensionMismatch


def test_rref_and_rank():
    m = RationalMatrix.from_rows([[2, 4], [1, 2], [0, 1]])
    reduced, r = rref(m)
    assert r == 2
    assert reduced.rows[0] == (1, 0)
    assert reduced.rows[1] == (0, 1)
    assert reduced.rows[2] == (0, 0)
    assert rank(RationalMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_det_and_inverse():
    m = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert det(m) == 1
    inv = inverse(m)
    assert (m @ inv).rows == RationalMatrix.identity(2).rows
    with pytest.raises(DimensionMismatch):
        inverse(RationalMatrix.from_rows([[1, 2], [2, 4]]))


def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatch):
        RationalMatrix.from_rows([[1, 2], [3]], ncols=2)


def test_commutator_of_units():
    e01 = RationalMatrix.unit(2, 0, 1)
    e10 = RationalMatrix.unit(2, 1, 0)
    assert commutator(e01, e10).rows == ((1, 0), (0, -1))


def test_kernel_dimension():
    m = RationalMatrix.from_rows([[1, 1, 0], [0, 0, 1]])
    k = kernel(m)
    assert k.dim == 1
    assert k.contains([1, -1, 0])


def test_sum_and_intersection():
    a = span([[1, 0, 0], [0, 1, 0]], 'Q3', 3)
    b = span([[0, 1, 0], [0, 0, 1]], 'Q3', 3)
    meet = subspace_intersection(a, b)
    assert meet.dim == 1
    assert meet.contains([0, 5, 0])
    assert subspace_sum(a, b).dim == 3
    assert is_subspace(meet, a)
    assert not is_subspace(a, b)
    assert relative_dim(full_space('Q3', 3), a) == 1


def test_intersection_with_zero():
    a = span([[1, 0]], 'Q2', 2)
    z = span([], 'Q2', 2)
    assert subspace_intersection(a, z).dim == 0


def test_equality_compares_echelon_basis():
    a = span([[2, 2], [1, 0]], 'Q2', 2)
    b = span([[0, 3], [Fraction(1, 2), 0]], 'Q2', 2)
    assert a == b
    assert a != span([[2, 2], [1, 0]], 'other', 2)


def test_ambients_must_match():
    with pytest.raises(DimensionMismatch):
        subspace_sum(span([[1]], 'A', 1), span([[1]], 'B', 1))


def test_complement_pivots():
    s = span([[1, 0, 1], [0, 0, 1]], 'Q3', 3)
    assert complement_pivots(s) == [1]
