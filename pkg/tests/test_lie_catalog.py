import random

import pytest

from analysis.exact_linalg import RationalMatrix
from analysis.lie_catalog import (
    GroupId, algebra_of, annihilator_rank, catalog_groups, commutator_closed, contains_matrix,
    expected_dim, is_group_element, parse_group_spec, sample_group_element, subalgebra_check,
)
from errors import DimensionMismatch, UserInputError

CATALOG = [g for p in (1, 2, 3, 4) for g in catalog_groups(p)]


@pytest.mark.parametrize("g", CATALOG, ids=str)
def test_algebra_dimension_matches_formula(g):
    spec = algebra_of(g)
    assert spec.dim == expected_dim(g)
    assert spec.dim == g.p * g.p - annihilator_rank(spec)


@pytest.mark.parametrize("g", CATALOG, ids=str)
def test_algebra_is_closed_under_bracket(g):
    assert commutator_closed(algebra_of(g))


@pytest.mark.parametrize("g", CATALOG, ids=str)
def test_samples_are_group_elements(g):
    rng = random.Random(11)
    for _ in range(3):
        assert is_group_element(g, sample_group_element(g, rng))


def test_parse_group_spec():
    assert parse_group_spec('so:3') == GroupId('so', (3,))
    assert parse_group_spec('DStar:1, 2') == GroupId('dstar', (1, 2))
    assert parse_group_spec('affplus:2').p == 3
    assert GroupId('tstar', (1, 2)).display == 'T*_r(1,2)'


@pytest.mark.parametrize("text", ['so3', 'foo:2', 'sp:3', 'dstar:1', 'so:0', 'so:x', ''])
def test_bad_group_specs(text):
    with pytest.raises(UserInputError):
        parse_group_spec(text)


def test_subalgebra_relations():
    so2, sl2, gl2 = parse_group_spec('so:2'), parse_group_spec('sl:2'), parse_group_spec('gl:2')
    assert subalgebra_check(so2, sl2)
    assert subalgebra_check(sl2, gl2)
    assert not subalgebra_check(gl2, sl2)
    assert subalgebra_check(parse_group_spec('sp:2'), sl2)
    assert subalgebra_check(sl2, parse_group_spec('sp:2'))
    with pytest.raises(DimensionMismatch):
        subalgebra_check(so2, parse_group_spec('so:3'))


def test_contains_matrix():
    so2 = algebra_of(parse_group_spec('so:2'))
    assert contains_matrix(so2, RationalMatrix.from_rows([[0, -1], [1, 0]]))
    assert not contains_matrix(so2, RationalMatrix.from_rows([[1, 0], [0, 1]]))


def test_group_membership_rejects():
    so2 = parse_group_spec('so:2')
    assert not is_group_element(so2, RationalMatrix.from_rows([[1, 1], [0, 1]]))
    assert not is_group_element(parse_group_spec('sl:2'), RationalMatrix.from_rows([[2, 0], [0, 1]]))
    assert not is_group_element(parse_group_spec('istar:1,1'), RationalMatrix.from_rows([[2, 0], [0, 1]]))
