import os
import random

import pytest

import config
from analysis import g_fields
from analysis.g_fields import (
    closed_form_basis, divergence, exterior_derivative, field_in_space, field_to_form,
    first_nonlinear_degree, hamiltonian_field, is_linear_only, multiply_field, ring_contains,
    ring_eg_jet, theta_g_degree, theta_g_jet,
)
from analysis.jet_algebra import GermJet, JetPoly
from analysis.lie_catalog import catalog_groups, parse_group_spec
from errors import UnsupportedGroupError, UserInputError
from utils import random_jet


@pytest.mark.parametrize("p", [2, 3, 4])
def test_so_fields_are_linear_rotations(p, fresh_slices):
    space = theta_g_jet(parse_group_spec(f'so:{p}'), 4)
    assert space.total_dim == p * (p - 1) // 2
    assert space.dims_by_degree()[1] == p * (p - 1) // 2
    assert all(space.dims_by_degree()[d] == 0 for d in (2, 3, 4))


def test_sl2_slices_have_dimension_d_plus_two():
    sl2 = parse_group_spec('sl:2')
    for d in range(1, 5):
        assert theta_g_degree(sl2, d).dim == d + 2


def test_gl_slices_are_everything():
    gl2 = parse_group_spec('gl:2')
    assert theta_g_degree(gl2, 3).dim == 2 * 4


def test_constants_included_on_request():
    space = theta_g_jet(parse_group_spec('so:2'), 2, include_constants=True)
    assert space.dims_by_degree()[0] == 2
    assert space.total_dim == 3


@pytest.mark.parametrize("g", [g for p in (2, 3) for g in catalog_groups(p)
                               if not (g.kind in ('sl', 'sp') and g.p != 2)], ids=str)
def test_closed_form_matches_kernel(g):
    k = 3
    generic = theta_g_jet(g, k)
    closed = closed_form_basis(g, k)
    for d in range(1, k + 1):
        assert closed.per_degree[d] == generic.per_degree[d]


def test_closed_form_unsupported_for_sl3():
    with pytest.raises(UnsupportedGroupError):
        closed_form_basis(parse_group_spec('sl:3'), 2)


def test_invalid_orders():
    with pytest.raises(UserInputError):
        theta_g_jet(parse_group_spec('so:2'), 0)
    with pytest.raises(UserInputError):
        is_linear_only(parse_group_spec('so:2'), 1)


def test_hamiltonian_fields_are_divergence_free():
    h = JetPoly.from_dict(2, 4, {(2, 1): 1, (0, 3): 1, (1, 1): 2})
    eta = hamiltonian_field(h)
    assert eta.order == 3
    assert divergence(eta).is_zero()
    assert field_in_space(theta_g_jet(parse_group_spec('sl:2'), 3), eta)


def test_form_derivative_is_divergence():
    rng = random.Random(3)
    comps = tuple(random_jet(3, 3, rng, min_degree=1) for _ in range(3))
    eta = GermJet(comps, allow_constants=True)
    assert exterior_derivative(field_to_form(eta)) == divergence(eta)


@pytest.mark.parametrize("spec,k,expected", [
    ('so:2', 4, 1),
    ('sl:2', 4, 1),
    ('dstar:1,1', 4, 1),
    ('tstar:1,2', 3, 10),
    ('tstar:1,2', 4, 15),
])
def test_ring_dimensions(spec, k, expected):
    assert ring_eg_jet(parse_group_spec(spec), k).dim == expected


def test_ring_membership_and_module_closure():
    g = parse_group_spec('tstar:1,2')
    ring = ring_eg_jet(g, 3)
    y2 = JetPoly.variable(3, 3, 1)
    y1 = JetPoly.variable(3, 3, 0)
    assert ring_contains(ring, y2 * y2 + 1)
    assert not ring_contains(ring, y1)
    space = theta_g_jet(g, 3)
    for eta in space.fields():
        assert field_in_space(space, multiply_field(y2, eta))


def test_rotation_field_leaves_space_under_non_ring_factor():
    space = theta_g_jet(parse_group_spec('so:2'), 3)
    rotation = GermJet((JetPoly.variable(2, 3, 1), -JetPoly.variable(2, 3, 0)), allow_constants=True)
    assert field_in_space(space, rotation)
    assert field_in_space(space, multiply_field(JetPoly.constant(2, 3, 2), rotation))
    assert not field_in_space(space, multiply_field(JetPoly.variable(2, 3, 0), rotation))


@pytest.mark.parametrize("spec,linear", [('so:2', True), ('so:4', True), ('socaptstar:3,1', True),
                                         ('gl:2', False), ('sl:2', False), ('trivial:2', True)])
def test_linear_only(spec, linear):
    assert is_linear_only(parse_group_spec(spec), 3) is linear


def test_first_nonlinear_degree():
    assert first_nonlinear_degree(parse_group_spec('gl:2'), 3) == 2
    assert first_nonlinear_degree(parse_group_spec('so:3'), 3) is None


def test_slices_round_trip_through_disk_cache(tmp_path, monkeypatch, fresh_slices):
    monkeypatch.setattr(config, 'CACHE_DIR', str(tmp_path))
    g = parse_group_spec('sl:2')
    first = theta_g_degree(g, 2)
    assert os.path.exists(tmp_path / 'theta_sl_2_deg2.json')
    g_fields.clear_cache()
    assert theta_g_degree(g, 2) == first
