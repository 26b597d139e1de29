from fractions import Fraction

import numpy as np
import pytest

from analysis.curve_geometry import (
    AkType, NumericJet, ak_normalize, ak_type, arclength_curvature, compose1, congruence_test,
    curvature, equiaffine_curvature, frontal_invariants, monge_normal_form, normal_form_curve,
    _special_linear, revert, series_pow, shift_down, signed_cbrt,
)
from analysis.jet_algebra import GermJet, JetPoly
from errors import GeometryError, UserInputError


def curve(order, first, second):
    return GermJet.from_dicts(1, order, [first, second])


def numeric(values):
    return NumericJet.univariate(values)


# --- numeric series ---

def test_series_pow_square_root():
    root = series_pow(numeric([1, 1, 0, 0]), 0.5)
    assert root.coeffs[:3] == pytest.approx([1.0, 0.5, -0.125])


def test_revert_inverts_composition():
    a = numeric([0, 1, 1, 0, 0])
    b = revert(a)
    assert b.coeffs == pytest.approx([0, 1, -1, 2, -5])
    assert compose1(a, b).coeffs == pytest.approx([0, 1, 0, 0, 0], abs=1e-12)


def test_signed_cbrt_of_negative_series():
    assert signed_cbrt(numeric([-8, 0, 0])).constant_term == pytest.approx(-2.0)


def test_shift_down_needs_divisibility():
    with pytest.raises(GeometryError):
        shift_down(numeric([0, 1, 1]), 2)


def test_numeric_jet_shape_checked():
    with pytest.raises(UserInputError):
        NumericJet(2, 2, np.zeros((2, 2)))


def test_numeric_jet_masks_above_order():
    jet = NumericJet(2, 1, np.ones((2, 2)))
    assert jet.coefficient((1, 1)) == 0.0
    assert jet.coefficient((1, 0)) == 1.0


# --- A_k ---

def test_ak_types():
    assert ak_type(JetPoly.monomial(1, 6, (3,))) == AkType(2, True)
    assert str(ak_type(JetPoly.from_dict(1, 6, {(2,): 1, (5,): 1}))) == 'A1'
    assert str(ak_type(JetPoly.zero(1, 6))) == 'A>=6'
    with pytest.raises(UserInputError):
        ak_type(JetPoly.constant(1, 3, 1))


def test_ak_normalize_already_normal():
    form = ak_normalize(curve(6, {(2,): 1}, {(4,): 1}))
    assert form.k == 1
    assert form.sign == 1
    assert not form.rotated
    assert form.h.coeffs == pytest.approx([0, 0, 1, 0, 0], abs=1e-12)
    assert form.phi.coefficient((1,)) == pytest.approx(1.0)


def test_ak_normalize_rotates_second_component():
    form = ak_normalize(curve(7, {(4,): 1}, {(3,): -1}))
    assert form.k == 2
    assert form.rotated
    assert form.sign == -1
    assert form.h.coefficient((1,)) == pytest.approx(-1.0)
    assert form.h.coefficient((0,)) == pytest.approx(0.0, abs=1e-12)


def test_ak_normalize_reparametrizes():
    form = ak_normalize(curve(8, {(2,): 1, (3,): 1}, {(4,): 1}))
    assert form.residual <= 1e-9
    assert form.phi.coefficient((1,)) == pytest.approx(1.0)
    first, second = normal_form_curve(form.k, form.sign, form.h)
    assert first.coefficient((2,)) == 1.0


def test_ak_normalize_needs_finite_type():
    with pytest.raises(GeometryError):
        ak_normalize(GermJet.zero(1, 2, 5))


@pytest.mark.parametrize("name,k", [('a1_curve', 1), ('a2_curve', 2), ('a3_curve', 3), ('a4_curve', 4)])
def test_fixture_ak_types(fixture_germ, name, k):
    assert ak_normalize(fixture_germ(name)).k == k


# --- curvature ---

def test_parabola_curvature():
    kappa = curvature(curve(6, {(1,): 1}, {(2,): 1}))
    assert kappa.coeffs[:3] == pytest.approx([2.0, 0.0, -12.0])
    assert arclength_curvature(curve(6, {(1,): 1}, {(2,): 1})).constant_term == pytest.approx(2.0)


def test_line_has_zero_curvature():
    assert curvature(curve(5, {(1,): 1}, {})).max_abs() == pytest.approx(0.0, abs=1e-15)


def test_circle_has_unit_curvature(fixture_germ):
    kappa = curvature(fixture_germ('circle'))
    assert kappa.coeffs == pytest.approx([1.0] + [0.0] * kappa.order, abs=1e-9)


def test_singular_curve_rejected(fixture_germ):
    with pytest.raises(GeometryError):
        curvature(fixture_germ('cusp'))


def test_curvature_sign_follows_orientation():
    f = curve(8, {(1,): 1, (3,): Fraction(1, 3)}, {(2,): 1, (3,): -1})
    phi = GermJet.from_dicts(1, 8, [{(1,): -1, (2,): 1}])
    g = f.compose(phi).apply_matrix([[3, -4], [4, 3]]).scale(Fraction(1, 5))
    expected = -compose1(curvature(f), NumericJet.from_jetpoly(phi[0]))
    assert curvature(g).coeffs == pytest.approx(expected.coeffs, abs=1e-8)


# --- frontal invariants ---

def test_frontal_invariants_of_flat_normal_form():
    inv = frontal_invariants(1, 1, NumericJet.zeros(1, 4))
    assert inv.ell.max_abs() == pytest.approx(0.0, abs=1e-12)
    assert inv.beta.coefficient((1,)) == pytest.approx(2.0)
    assert inv.mu[0].constant_term == pytest.approx(1.0)
    assert inv.mu[1].constant_term == pytest.approx(0.0)


def test_frontal_ell_frame_and_literature_values():
    inv = frontal_invariants(2, 1, numeric([0, 1, 0, 0, 0]))
    assert inv.ell.constant_term == pytest.approx(-4.0 / 3.0)
    assert inv.extras['ell_literature'].constant_term == pytest.approx(4.0 / 9.0)
    assert max(inv.residuals.values()) <= 1e-9


def test_beta_vanishes_to_order_k():
    inv = frontal_invariants(3, -1, numeric([0.5, 1, -2, 0, 1, 0]))
    assert inv.beta.coeffs[:3] == pytest.approx([0, 0, 0], abs=1e-12)
    assert inv.beta.coefficient((3,)) == pytest.approx(np.sqrt(20.0))


def test_frontal_sign_must_be_unit():
    with pytest.raises(UserInputError):
        frontal_invariants(1, 2, NumericJet.zeros(1, 3))


# --- equi-affine ---

def test_parabola_is_equiaffine_flat(fixture_germ):
    assert equiaffine_curvature(fixture_germ('parabola')).max_abs() == pytest.approx(0.0, abs=1e-9)


def test_ellipse_equiaffine_curvature(fixture_germ):
    kappa = equiaffine_curvature(fixture_germ('ellipse'))
    assert kappa.constant_term == pytest.approx(2.0 ** (-2.0 / 3.0), abs=1e-6)
    assert np.max(np.abs(kappa.coeffs[1:])) <= 1e-6


def test_equiaffine_curvature_ignores_orientation(fixture_germ):
    f = fixture_germ('ellipse')
    g = f.compose(GermJet.from_dicts(1, f.order, [{(1,): -1}]))
    assert equiaffine_curvature(g).constant_term == pytest.approx(equiaffine_curvature(f).constant_term)


@pytest.mark.parametrize("second", [{}, {(3,): 1}])
def test_inflections_rejected(second):
    with pytest.raises(GeometryError):
        equiaffine_curvature(curve(6, {(1,): 1}, second))


# --- congruence ---

def wiggly_curve(order=8):
    return curve(order, {(1,): 1, (3,): Fraction(1, 3)}, {(2,): 1, (3,): -1})


def test_euclidean_congruence_recovers_motion():
    f = wiggly_curve()
    phi = GermJet.from_dicts(1, 8, [{(1,): 2, (2,): 1}])
    g = f.compose(phi).apply_matrix([[3, -4], [4, 3]]).scale(Fraction(1, 5))
    result = congruence_test(f, g, 'euclidean')
    assert result.match
    assert result.sig == 1
    assert result.phi.coefficient((1,)) == pytest.approx(2.0, abs=1e-6)
    assert result.phi.coefficient((2,)) == pytest.approx(1.0, abs=1e-6)
    assert np.array(result.matrix) == pytest.approx(np.array([[0.6, -0.8], [0.8, 0.6]]), abs=1e-6)


def test_equiaffine_congruence_with_reversed_parameter():
    f = wiggly_curve()
    phi = GermJet.from_dicts(1, 8, [{(1,): -1, (2,): Fraction(1, 2)}])
    g = f.compose(phi).apply_matrix([[1, 1], [0, 1]])
    result = congruence_test(f, g, 'equiaffine')
    assert result.match
    assert result.sig == -1
    assert np.array(result.matrix) == pytest.approx(np.array([[1.0, 1.0], [0.0, 1.0]]), abs=1e-6)


def test_mirror_image_is_not_equiaffine_congruent():
    f = curve(8, {(1,): 1}, {(2,): 1, (3,): 1})
    mirrored = f.apply_matrix([[1, 0], [0, -1]])
    result = congruence_test(f, mirrored, 'equiaffine')
    assert not result.match
    assert result.obstruction_degree == 1


@pytest.mark.parametrize("matrix,special", [
    ([[1.0, 1.0], [0.0, 1.0]], True),
    ([[2.0, 0.0], [0.0, 0.5]], True),
    ([[1.0, 0.0], [0.0, -1.0]], False),
    ([[0.0, 1.0], [1.0, 0.0]], False),
])
def test_special_linear_guard(matrix, special):
    assert _special_linear(np.array(matrix), 1e-6) is special


def test_non_congruent_curves_report_obstruction(fixture_germ):
    g = curve(8, {(1,): 1}, {(3,): 1})
    result = congruence_test(fixture_germ('parabola'), g, 'euclidean')
    assert not result.match
    assert result.obstruction_degree == 0


def test_curve_is_congruent_to_itself(fixture_germ):
    f = fixture_germ('circle')
    result = congruence_test(f, f, 'euclidean')
    assert result.match
    assert result.residual <= 1e-9


# --- Monge form ---

def test_monge_plane(fixture_germ):
    form = monge_normal_form(fixture_germ('monge_plane'))
    assert (form.lambda1, form.lambda2) == pytest.approx((0.0, 0.0), abs=1e-12)
    assert form.cubic == pytest.approx((0, 0, 0, 0), abs=1e-12)
    assert any('umbilic' in note for note in form.notes)


def test_monge_saddle(fixture_germ):
    form = monge_normal_form(fixture_germ('monge_saddle'))
    assert (form.lambda1, form.lambda2) == pytest.approx((1.0, -1.0))
    assert form.principal_curvatures == pytest.approx((2.0, -2.0))


def test_monge_generic(fixture_germ):
    form = monge_normal_form(fixture_germ('monge_generic'))
    assert (form.lambda1, form.lambda2) == pytest.approx((2.0, 0.5))
    assert form.cubic == pytest.approx((1.0, 0.0, -1.0, 1.0 / 3.0), abs=1e-9)
    assert form.rotation == pytest.approx(np.eye(3), abs=1e-9)


def test_monge_invariant_under_motion_and_reparametrization(fixture_germ):
    f = fixture_germ('monge_generic')
    phi = GermJet.from_dicts(2, f.order, [{(1, 0): 1, (0, 2): 1}, {(0, 1): 1, (1, 1): 1}])
    fifth = Fraction(1, 5)
    rotation = [[3 * fifth, 0, 4 * fifth], [0, 1, 0], [-4 * fifth, 0, 3 * fifth]]
    form = monge_normal_form(f.compose(phi).apply_matrix(rotation))
    assert (form.lambda1, form.lambda2) == pytest.approx((2.0, 0.5), abs=1e-8)
    assert form.cubic == pytest.approx((1.0, 0.0, -1.0, 1.0 / 3.0), abs=1e-7)


def test_monge_recovered_through_ill_conditioned_reparametrization(fixture_germ):
    f = fixture_germ('monge_generic')
    phi = GermJet.from_dicts(2, f.order, [
        {(1, 0): Fraction(19, 6), (0, 1): Fraction(69, 4), (0, 2): 1},
        {(1, 0): Fraction(7, 6), (0, 1): Fraction(25, 4), (1, 1): 1},
    ])
    fifth = Fraction(1, 5)
    rotation = [[1, 0, 0], [0, 3 * fifth, -4 * fifth], [0, 4 * fifth, 3 * fifth]]
    form = monge_normal_form(f.compose(phi).apply_matrix(rotation))
    assert (form.lambda1, form.lambda2) == pytest.approx((2.0, 0.5), abs=1e-7)
    assert form.cubic == pytest.approx((1.0, 0.0, -1.0, 1.0 / 3.0), abs=1e-7)
    assert form.residual <= 1e-8


def test_monge_immersion_threshold_separate_from_tolerance(fixture_germ):
    f = fixture_germ('monge_generic')
    squeeze = GermJet.from_dicts(2, f.order, [{(1, 0): 1}, {(0, 1): Fraction(1, 1000)}])
    thin = f.compose(squeeze)
    form = monge_normal_form(thin, tol=1e-2)
    assert (form.lambda1, form.lambda2) == pytest.approx((2.0, 0.5), abs=1e-9)
    with pytest.raises(GeometryError):
        monge_normal_form(thin, immersion_tol=1e-2)


def test_monge_needs_immersion():
    f = GermJet.from_dicts(2, 4, [{(1, 0): 1}, {(2, 0): 1}, {(0, 2): 1}])
    with pytest.raises(GeometryError):
        monge_normal_form(f)
