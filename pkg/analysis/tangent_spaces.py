"""
Tangent spaces of 𝒜[G]- and ℛ×G-orbits at jet level, their codimensions, and the
relative moduli spaces between nested equivalences.

Everything lives in the coordinates of (k-1)-jets of θ(f): tf involves first
derivatives of the k-jet, which are only known to order k-1. Non-extended spaces use
the 𝔐_n-part (degrees 1..k-1), extended spaces the full jets (degrees 0..k-1).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import config
from analysis.exact_linalg import (
    RationalMatrix, complement_pivots, is_subspace, kernel, quotient_dim, rank,
    relative_dim, span, subspace_intersection, subspace_sum,
)
from analysis.g_fields import first_nonlinear_degree, slice_coordinates, theta_g_degree
from analysis.jet_algebra import JetCoordinates, JetPoly, homogeneous_monomials, jp_compose, jp_diff
from analysis.lie_catalog import algebra_of, subalgebra_check
from errors import DimensionMismatch, InvariantViolation, NotSubgroupError, UserInputError

log = logging.getLogger(__name__)

IDENTITY_COMPONENT_NOTE = "tangent spaces model the identity component of the group"
EARLY_GROWTH_NOTE = (
    f"range starts below k={config.GROWTH_K_MIN}: comparison happens at order k-1, and the "
    "lowest orders can repeat a codimension (cusp under SO(2) gives 1, 1, 2, 3, 4 for k=2..6), "
    "so the sequence need not be strictly increasing there"
)


class Equivalence(str, Enum):
    AG = 'ag'
    RXG = 'rxg'


class Pair(str, Enum):
    AG_VS_RXG = 'ag-vs-rxg'
    AG_VS_AH = 'ag-vs-ah'
    RXG_VS_RXH = 'rxg-vs-rxh'


def ambient(f, k, extended):
    return JetCoordinates(f.n, f.p, k - 1, 0 if extended else 1)


def _check_order(f, k):
    if k < 1:
        raise UserInputError(f"jet order must be at least 1, got {k}")
    if f.order < k:
        raise UserInputError(f"germ is given to order {f.order}, cannot compute at jet order {k}")


def _check_group(f, g):
    if g.p != f.p:
        raise DimensionMismatch(f"{g} acts on R^{g.p} but the germ maps into R^{f.p}")


@lru_cache(maxsize=256)
def tf_image(f, k, extended=False):
    """span of x^α·∂f/∂x_i, |α| ≥ 1 (≥ 0 if extended), at comparison order k-1."""
    _check_order(f, k)
    coords = ambient(f, k, extended)
    order = k - 1
    partials = [[jp_diff(c, i).truncate(order) for c in f.components] for i in range(f.n)]
    vectors = []
    for d in range(0 if extended else 1, order + 1):
        for alpha in homogeneous_monomials(f.n, d):
            x_alpha = JetPoly.monomial(f.n, order, alpha)
            for column in partials:
                vectors.append(coords.vector([x_alpha * c for c in column]))
    return span(vectors, coords.label, coords.dim)


@lru_cache(maxsize=256)
def omega_image(f, g, k, extended=False):
    """span of ξ∘f over the θ[G]₀ basis (θ[G] if extended), at comparison order k-1.
    Fields of degree ≥ k compose into degree ≥ k and vanish here."""
    _check_order(f, k)
    _check_group(f, g)
    coords = ambient(f, k, extended)
    order = k - 1
    inner = f.truncate(order)
    vectors = []
    for d in range(0 if extended else 1, order + 1):
        sc = slice_coordinates(g.p, d)
        for row in theta_g_degree(g, d).basis:
            xi = [c.with_order(order) for c in sc.components(row)]
            vectors.append(coords.vector([jp_compose(c, inner) for c in xi]))
    return span(vectors, coords.label, coords.dim)


def _apply(x, f, order):
    comps = []
    for row in x.rows:
        acc = JetPoly.zero(f.n, order)
        for a, c in zip(row, f.components):
            if a:
                acc = acc + c.truncate(order) * a
        comps.append(acc)
    return comps


@lru_cache(maxsize=256)
def g_of_f(f, g, order=None, extended=False):
    """𝔤(f) = span{X·f : X ∈ 𝔤}, in the coordinates of `order`-jets (default f.order)."""
    _check_group(f, g)
    order = f.order if order is None else order
    coords = JetCoordinates(f.n, f.p, order, 0 if extended else 1)
    vectors = [coords.vector(_apply(x, f, order)) for x in algebra_of(g).basis]
    return span(vectors, coords.label, coords.dim)


def annihilator_dim(f, g, order=None):
    """dim 𝔤_f = dim 𝔤 − dim 𝔤(f)."""
    return algebra_of(g).dim - g_of_f(f, g, order).dim


def matrix_annihilator(f, order=None):
    """M_p(R)_f = {X : X·f = 0} as a subspace of flattened p×p matrices."""
    order = f.order if order is None else order
    coords = JetCoordinates(f.n, f.p, order, 1)
    p = f.p
    columns = []
    for a in range(p):
        for b in range(p):
            unit = RationalMatrix.unit(p, a, b)
            columns.append(coords.vector(_apply(unit, f, order)))
    system = RationalMatrix(tuple(zip(*columns)) if coords.dim else (), p * p)
    return kernel(system, f"M_{p}")


def is_submersion(f):
    return rank(RationalMatrix.from_rows(f.linear_part(), f.n)) == f.p


@dataclass(frozen=True)
class TangentReport:
    f: object
    group: object
    eq: Equivalence
    k: int
    extended: bool
    dims: dict
    codim_k: int
    stabilized: bool
    comparison_order: int
    ambient_dim: int
    is_submersion: bool
    complement: tuple = ()
    notes: tuple = ()
    subspace: object = field(default=None, compare=False, repr=False)

    def to_payload(self):
        return {
            'germ': str(self.f), 'group': self.group.spec, 'eq': self.eq.value, 'k': self.k,
            'extended': self.extended, 'comparison_order': self.comparison_order,
            'ambient_dim': self.ambient_dim, 'dims': dict(self.dims), 'codim_k': self.codim_k,
            'stabilized': self.stabilized, 'is_submersion': self.is_submersion,
            'complement': list(self.complement), 'notes': list(self.notes),
        }


def tangent_subspace(f, g, eq, k, extended=False):
    """(T, pieces) where T is T𝒜[G](f) or T(ℛ×G)(f) at comparison order k-1."""
    eq = Equivalence(eq)
    tf = tf_image(f, k, extended)
    coords = ambient(f, k, extended)
    if eq is Equivalence.AG:
        other = omega_image(f, g, k, extended)
        pieces = {'tf_image': tf.dim, 'omega_image': other.dim}
    else:
        # 𝔤(f) sits in the 𝔐_n-part even for extended spaces
        other = g_of_f(f, g, k - 1, extended)
        pieces = {'tf_image': tf.dim, 'g_of_f': other.dim}
    if other.ambient_label != coords.label:
        raise InvariantViolation(f"tangent pieces disagree on coordinates: {other.ambient_label} vs {coords.label}")
    total = subspace_sum(tf, other)
    return total, pieces


def codimension(f, g, eq, k, extended=False):
    total, _ = tangent_subspace(f, g, eq, k, extended)
    return quotient_dim(total, ambient(f, k, extended).dim)


def tangent(f, g, eq, k, extended=False):
    _check_order(f, k)
    _check_group(f, g)
    eq = Equivalence(eq)
    coords = ambient(f, k, extended)
    total, pieces = tangent_subspace(f, g, eq, k, extended)
    codim = quotient_dim(total, coords.dim)
    if total.dim > sum(pieces.values()):
        raise InvariantViolation("tangent space exceeds the sum of its pieces")
    stabilized = k >= 2 and codimension(f, g, eq, k - 1, extended) == codim
    dims = dict(pieces)
    dims['tangent_total'] = total.dim
    complement = ()
    if 0 < codim <= config.COMPLEMENT_LISTING_MAX:
        complement = tuple(coords.coordinate_name(j) for j in complement_pivots(total))
    notes = [IDENTITY_COMPONENT_NOTE]
    if stabilized:
        notes.append("stabilized: codim equal at two consecutive orders (heuristic)")
    return TangentReport(f, g, eq, k, extended, dims, codim, stabilized, k - 1, coords.dim,
                         is_submersion(f), complement, tuple(notes), total)


@dataclass(frozen=True)
class ModuliReport:
    f: object
    pair: Pair
    group: object
    subgroup: object
    k: int
    dim: int
    bound: int | None
    refined_bound: int | None
    exact_sequence_ok: bool
    quotient_pieces: dict
    notes: tuple = ()

    def to_payload(self):
        return {
            'germ': str(self.f), 'pair': self.pair.value, 'group': self.group.spec,
            'subgroup': self.subgroup.spec if self.subgroup else None, 'k': self.k,
            'comparison_order': self.k - 1, 'dim': self.dim, 'bound': self.bound,
            'refined_bound': self.refined_bound, 'exact_sequence_ok': self.exact_sequence_ok,
            'quotient_pieces': dict(self.quotient_pieces), 'notes': list(self.notes),
        }


def _pair_parts(f, pair, g, h, k):
    """G-part A and H-part B ⊆ A of the two tangent spaces, both besides tf."""
    if pair is Pair.AG_VS_RXG:
        return omega_image(f, g, k), g_of_f(f, g, k - 1)
    if pair is Pair.AG_VS_AH:
        return omega_image(f, g, k), omega_image(f, h, k)
    return g_of_f(f, g, k - 1), g_of_f(f, h, k - 1)


def moduli(f, pair, k, group, subgroup=None):
    """dim of (larger tangent)/(smaller tangent) with the exact-sequence audit.

    With T = tf(𝔐_nθ(n)), A the G-part and B ⊆ A the H-part:
    dim((T+A)/(T+B)) = dim(A/B) − dim((T∩A)/(T∩B)).
    """
    pair = Pair(pair)
    _check_order(f, k)
    _check_group(f, group)
    if pair is Pair.AG_VS_RXG:
        subgroup = None
    else:
        if subgroup is None:
            raise UserInputError(f"pair {pair.value} needs a subgroup")
        _check_group(f, subgroup)
        if not subalgebra_check(subgroup, group):
            raise NotSubgroupError(f"{subgroup} is not a subgroup of {group}")

    t = tf_image(f, k)
    a, b = _pair_parts(f, pair, group, subgroup, k)
    if not is_subspace(b, a):
        raise InvariantViolation(f"{pair.value}: smaller group part is not contained in the larger one")
    larger = subspace_sum(t, a)
    smaller = subspace_sum(t, b)
    if not is_subspace(smaller, larger):
        raise InvariantViolation(f"{pair.value}: smaller tangent space is not contained in the larger one")
    dim = relative_dim(larger, smaller)

    part_quotient = relative_dim(a, b)
    meet_quotient = relative_dim(subspace_intersection(t, a), subspace_intersection(t, b))
    exact_ok = dim == part_quotient - meet_quotient

    bound = None
    refined = None
    notes = []
    if pair is Pair.RXG_VS_RXH:
        bound = algebra_of(group).dim - algebra_of(subgroup).dim
        refined = _refined_bound(f, group, subgroup, k - 1)
    elif pair is Pair.AG_VS_AH and first_nonlinear_degree(group, k - 1) is None:
        bound = algebra_of(group).dim - algebra_of(subgroup).dim
        notes.append(f"{group} has no nonlinear fields up to order {k - 1}; the 𝒜 pair agrees with the ℛ× pair")
    elif pair is Pair.AG_VS_RXG and first_nonlinear_degree(group, k - 1) is None:
        bound = 0
    if bound is not None and dim > bound:
        raise InvariantViolation(f"{pair.value}: moduli dim {dim} exceeds bound {bound}")
    if not exact_ok:
        raise InvariantViolation(f"{pair.value}: exact-sequence identity fails "
                                 f"({dim} != {part_quotient} - {meet_quotient})")
    pieces = {'part_quotient': part_quotient, 'intersection_quotient': meet_quotient,
              'larger_dim': larger.dim, 'smaller_dim': smaller.dim}
    return ModuliReport(f, pair, group, subgroup, k, dim, bound, refined, exact_ok, pieces, tuple(notes))


def _refined_bound(f, g, h, order):
    """dim((𝔤 + M_f)/(𝔥 + M_f)) with M_f the matrices killing f."""
    m_f = matrix_annihilator(f, order)
    big = subspace_sum(algebra_of(g).basis_span(), m_f)
    small = subspace_sum(algebra_of(h).basis_span(), m_f)
    return relative_dim(big, small)


@dataclass(frozen=True)
class RigidityReport:
    group: object
    k: int
    linear_only: bool
    first_nonlinear_degree: int | None
    germs: tuple

    def to_payload(self):
        return {
            'group': self.group.spec, 'k': self.k, 'linear_only': self.linear_only,
            'first_nonlinear_degree': self.first_nonlinear_degree, 'germs': [dict(g) for g in self.germs],
        }


def rigidity_report(g, k, sample_germs):
    """For linear-only G: T𝒜[G](f) = T(ℛ×G)(f) and zero moduli on every sample germ.
    sample_germs is a sequence of (name, GermJet)."""
    if k < 2:
        raise UserInputError(f"rigidity needs k >= 2, got {k}")
    witness = first_nonlinear_degree(g, k)
    linear_only = witness is None
    rows = []
    for name, f in sample_germs:
        if f.p != g.p:
            continue
        jet_k = min(k, f.order)
        ag, _ = tangent_subspace(f, g, Equivalence.AG, jet_k)
        rxg, _ = tangent_subspace(f, g, Equivalence.RXG, jet_k)
        equal = ag == rxg
        mod = moduli(f, Pair.AG_VS_RXG, jet_k, g).dim
        if linear_only and (not equal or mod):
            raise InvariantViolation(f"{g} is linear-only yet {name} has distinct tangent spaces")
        rows.append({'germ': name, 'k': jet_k, 'tangent_equal': equal, 'moduli_dim': mod})
    return RigidityReport(g, k, linear_only, witness, tuple(rows))


@dataclass(frozen=True)
class GrowthReport:
    f: object
    group: object
    eq: Equivalence
    extended: bool
    codims: dict
    monotone: bool
    strictly_increasing: bool
    label: str = 'evidence'
    notes: tuple = ()

    def to_payload(self):
        return {
            'germ': str(self.f), 'group': self.group.spec, 'eq': self.eq.value,
            'extended': self.extended, 'label': self.label, 'monotone': self.monotone,
            'strictly_increasing': self.strictly_increasing,
            'codims': [{'k': k, 'codim': c} for k, c in sorted(self.codims.items())],
            'notes': list(self.notes),
        }


def growth_probe(f, g, eq, k_max, extended=True, k_min=config.GROWTH_K_MIN):
    """codim_k for k = k_min..k_max; growth is evidence of infinite codimension, not proof."""
    if k_min < 1 or k_max <= k_min:
        raise UserInputError(f"growth probe needs 1 <= k_min < k_max, got {k_min}..{k_max}")
    _check_order(f, k_max)
    eq = Equivalence(eq)
    codims = {k: codimension(f, g, eq, k, extended) for k in range(k_min, k_max + 1)}
    values = [codims[k] for k in sorted(codims)]
    monotone = all(a <= b for a, b in zip(values, values[1:]))
    strictly = all(a < b for a, b in zip(values, values[1:]))
    notes = [f"codimensions compared at orders {k_min - 1}..{k_max - 1}"]
    if k_min < config.GROWTH_K_MIN:
        notes.append(EARLY_GROWTH_NOTE)
        log.warning(EARLY_GROWTH_NOTE)
    return GrowthReport(f, g, eq, extended, codims, monotone, strictly, notes=tuple(notes))
