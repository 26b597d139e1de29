import random

import pytest

import utils
from analysis.lie_catalog import GroupId
from analysis.tangent_spaces import is_submersion
from errors import UserInputError


@pytest.mark.parametrize("text,expected", [
    ('so:3', GroupId('so', (3,))),
    ('SO(3)', GroupId('so', (3,))),
    ('T*_r(1,2)', GroupId('tstar', (1, 2))),
    ('Sp(4)', GroupId('sp', (4,))),
])
def test_resolve_group(text, expected):
    assert utils.resolve_group(text) == expected


@pytest.mark.parametrize("text", ['', 'SO3', 'Foo(2)'])
def test_resolve_group_rejects(text):
    with pytest.raises(UserInputError):
        utils.resolve_group(text)


def test_normalize():
    assert utils.normalize(' Ünïcode_Name ') == 'unicodename'


def test_random_jet_respects_min_degree():
    jet = utils.random_jet(2, 3, random.Random(1), min_degree=2, density=1.0)
    assert jet.terms
    assert all(sum(m) >= 2 for m, _ in jet.terms)


def test_random_diffeo_is_invertible():
    phi = utils.random_diffeo_jet(2, 4, random.Random(5))
    assert is_submersion(phi)
    assert phi.valuation() == 1


def test_random_fraction_bounds():
    rng = random.Random(2)
    values = [utils.random_fraction(rng) for _ in range(50)]
    assert all(abs(v) <= 3 for v in values)
