"""
Vector fields whose Jacobian lies pointwise in 𝔤, and the ring they are a module over.

θ[G] is graded: a homogeneous degree-d field has a homogeneous degree-(d-1) Jacobian,
so the condition "every Jacobian coefficient matrix is annihilated by 𝔤's
annihilators" is an exact linear system per degree. `theta_g_degree` solves it and
memoizes the slice; `closed_form_basis` rebuilds the same slices from explicit
generators so the two can be compared.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import config
import data
from analysis.exact_linalg import (
    ZERO, RationalMatrix, SubspaceBasis, full_space, kernel, span,
)
from analysis.jet_algebra import (
    GermJet, JetCoordinates, JetPoly, homogeneous_monomials, jp_diff,
)
from analysis.lie_catalog import algebra_of
from errors import DimensionMismatch, UnsupportedGroupError, UserInputError

log = logging.getLogger(__name__)

_SLICE_CACHE = {}
_SLICE_LOCK = threading.Lock()


def slice_coordinates(p, d):
    """Coordinates of homogeneous degree-d vector fields on R^p."""
    return JetCoordinates(p, p, d, d)


def _shift(mono, j, by=1):
    return mono[:j] + (mono[j] + by,) + mono[j + 1:]


def _solve_slice(g, d):
    p = g.p
    coords = slice_coordinates(p, d)
    spec = algebra_of(g)
    if d == 0 or not spec.annihilators:
        return full_space(coords.label, coords.dim)
    width = len(coords.monomials)
    rows = []
    for beta in homogeneous_monomials(p, d - 1):
        for a in spec.annihilators:
            row = [ZERO] * coords.dim
            for i in range(p):
                for j in range(p):
                    w = a[i, j]
                    if w:
                        alpha = _shift(beta, j)
                        row[i * width + coords.index[alpha]] += w * (beta[j] + 1)
            if any(row):
                rows.append(row)
    return kernel(RationalMatrix(tuple(rows), coords.dim), coords.label)


def theta_g_degree(g, d):
    """Homogeneous degree-d slice of θ[G](p) as a subspace of slice_coordinates(p, d)."""
    if d < 0:
        raise UserInputError(f"degree must be non-negative, got {d}")
    key = (g, d)
    with _SLICE_LOCK:
        cached = _SLICE_CACHE.get(key)
    if cached is not None:
        return cached

    coords = slice_coordinates(g.p, d)
    stored = data.load_field_slice(g.spec, d) if config.CACHE_DIR else None
    if stored is not None:
        result = span(stored, coords.label, coords.dim)
    else:
        result = _solve_slice(g, d)
        if config.CACHE_DIR:
            data.save_field_slice(g.spec, d, result.basis)
    log.debug(f"theta[{g.spec}] degree {d}: dim {result.dim}")

    with _SLICE_LOCK:
        _SLICE_CACHE.setdefault(key, result)
        return _SLICE_CACHE[key]


def clear_cache():
    with _SLICE_LOCK:
        _SLICE_CACHE.clear()


@dataclass(frozen=True)
class GFieldSpace:
    group: object
    k: int
    include_constants: bool
    per_degree: dict = field(default_factory=dict)

    @property
    def p(self):
        return self.group.p

    @property
    def total_dim(self):
        return sum(s.dim for s in self.per_degree.values())

    @property
    def min_degree(self):
        return 0 if self.include_constants else 1

    def coordinates(self):
        return JetCoordinates(self.p, self.p, self.k, self.min_degree)

    def degree_fields(self, d):
        """Basis fields of the degree-d slice as GermJets of order k."""
        coords = slice_coordinates(self.p, d)
        out = []
        for row in self.per_degree[d].basis:
            comps = tuple(c.with_order(self.k) for c in coords.components(row))
            out.append(GermJet(comps, allow_constants=True))
        return out

    def fields(self):
        out = []
        for d in sorted(self.per_degree):
            out.extend(self.degree_fields(d))
        return out

    def as_subspace(self):
        coords = self.coordinates()
        return span([coords.vector(f.components) for f in self.fields()], coords.label, coords.dim)

    def contains_field(self, eta):
        return field_in_space(self, eta)

    def dims_by_degree(self):
        return {d: s.dim for d, s in sorted(self.per_degree.items())}


def theta_g_jet(g, k, include_constants=False):
    if k < 1:
        raise UserInputError(f"jet order must be at least 1, got {k}")
    start = 0 if include_constants else 1
    return GFieldSpace(g, k, include_constants, {d: theta_g_degree(g, d) for d in range(start, k + 1)})


# --- closed forms ---

def _unit_field(p, d, i, mono, coeff=1):
    comps = [JetPoly.zero(p, d) for _ in range(p)]
    comps[i] = JetPoly.monomial(p, d, mono, coeff)
    return tuple(comps)


def _supported_on(mono, indices):
    return all(e == 0 for j, e in enumerate(mono) if j not in indices)


def _rotations(p, d, blocks):
    if d != 1:
        return []
    out = []
    for block in blocks:
        for i in block:
            for j in block:
                if i < j:
                    comps = [JetPoly.zero(p, 1) for _ in range(p)]
                    comps[i] = JetPoly.variable(p, 1, j)
                    comps[j] = -JetPoly.variable(p, 1, i)
                    out.append(tuple(comps))
    return out


def _lagrangian_generators(p, d):
    m = p // 2
    ys = set(range(m, p))
    out = []
    for alpha in homogeneous_monomials(p, d):
        if not _supported_on(alpha, ys):
            continue
        xi = JetPoly.monomial(p, d, alpha)
        for k in range(m):
            comps = [JetPoly.zero(p, d) for _ in range(p)]
            for i in range(m):
                comps[i] = -(JetPoly.variable(p, d, k) * jp_diff(xi, m + i))
            comps[m + k] = xi
            out.append(tuple(comps))
    for gamma in homogeneous_monomials(p, d + 1):
        if not _supported_on(gamma, ys):
            continue
        eta = JetPoly.monomial(p, d + 1, gamma)
        comps = [JetPoly.zero(p, d) for _ in range(p)]
        for i in range(m):
            comps[i] = -jp_diff(eta, m + i).with_order(d)
        out.append(tuple(comps))
    return out


def _closed_form_generators(g, d):
    p = g.p
    kind = g.kind
    monos = homogeneous_monomials(p, d)
    everything = [_unit_field(p, d, i, a) for i in range(p) for a in monos]
    if d == 0 or kind == 'gl':
        return everything
    if kind == 'trivial' or (kind == 'sl' and p == 1):
        return []
    if kind in ('sl', 'sp'):
        if p != 2:
            raise UnsupportedGroupError(f"no closed form for {g.display}; use the generic kernel")
        return [hamiltonian_field(JetPoly.monomial(2, d + 1, h)).components for h in homogeneous_monomials(2, d + 1)]
    if kind == 'so':
        return _rotations(p, d, [range(p)])
    if kind == 'lagr':
        return _lagrangian_generators(p, d)
    if kind == 'affplus':
        return [_unit_field(p, d, i, a) for i in range(p) for a in monos if a[0] == 0]
    p1 = g.dims[0]
    first, second = set(range(p1)), set(range(p1, p))
    if kind == 'socaptstar':
        return _rotations(p, d, [range(p1), range(p1, p)])
    if kind == 'dstar':
        return [_unit_field(p, d, i, a) for i in range(p) for a in monos
                if _supported_on(a, first if i < p1 else second)]
    if kind == 'tstar':
        return [_unit_field(p, d, i, a) for i in range(p) for a in monos
                if i < p1 or _supported_on(a, second)]
    if kind == 'istar':
        return [_unit_field(p, d, i, a) for i in range(p1, p) for a in monos if _supported_on(a, second)]
    raise UnsupportedGroupError(f"no closed form for {g.display}")


def closed_form_basis(g, k, include_constants=False):
    if k < 1:
        raise UserInputError(f"jet order must be at least 1, got {k}")
    per_degree = {}
    for d in range(0 if include_constants else 1, k + 1):
        coords = slice_coordinates(g.p, d)
        gens = _closed_form_generators(g, d)
        per_degree[d] = span([coords.vector(c) for c in gens], coords.label, coords.dim)
    return GFieldSpace(g, k, include_constants, per_degree)


# --- Hamiltonian fields, divergence, forms ---

def hamiltonian_field(h):
    """Δ(H) = (-∂H/∂y2, ∂H/∂y1), a divergence-free field one order below H."""
    if h.n != 2:
        raise DimensionMismatch(f"Hamiltonian fields need 2 variables, got {h.n}")
    if h.constant_term:
        raise UserInputError("Hamiltonian must have zero constant term")
    order = max(h.order - 1, 0)
    return GermJet((-jp_diff(h, 1).with_order(order), jp_diff(h, 0).with_order(order)), allow_constants=True)


def divergence(eta):
    if eta.n != eta.p:
        raise DimensionMismatch(f"divergence needs a field on R^p, got n={eta.n}, p={eta.p}")
    order = max(eta.order - 1, 0)
    total = JetPoly.zero(eta.n, eta.order)
    for i, comp in enumerate(eta.components):
        total = total + jp_diff(comp, i)
    return total.truncate(order)


def field_to_form(eta):
    """Coefficients of ω_η: entry i multiplies dy_1∧…(dy_{i+1} omitted)…∧dy_p."""
    return [comp * (-1) ** i for i, comp in enumerate(eta.components)]


def exterior_derivative(form):
    """Coefficient of dy_1∧…∧dy_p in dω for ω given by field_to_form coefficients."""
    n = form[0].n
    order = form[0].order
    total = JetPoly.zero(n, order)
    for i, coeff in enumerate(form):
        total = total + jp_diff(coeff, i) * (-1) ** i
    return total.truncate(max(order - 1, 0))


# --- the ring 𝓔_p[G] ---

@dataclass(frozen=True)
class GRingJet:
    group: object
    k: int
    basis: SubspaceBasis
    per_degree: dict

    def coordinates(self):
        return JetCoordinates(self.group.p, 1, self.k, 0)

    @property
    def dim(self):
        return self.basis.dim

    def contains(self, lam):
        return ring_contains(self, lam)

    def elements(self):
        coords = self.coordinates()
        return [coords.components(row)[0] for row in self.basis.basis]


def _ring_slice(g, m, fields_by_degree):
    p = g.p
    spec = algebra_of(g)
    lam_monos = homogeneous_monomials(p, m)
    lam_index = {a: i for i, a in enumerate(lam_monos)}
    grad_monos = homogeneous_monomials(p, m - 1)
    rows = []
    for eta_list in fields_by_degree.values():
        for eta in eta_list:
            contributions = {}
            for i, comp in enumerate(eta):
                for alpha, c in comp.terms:
                    for gamma in grad_monos:
                        delta = tuple(x + y for x, y in zip(alpha, gamma))
                        entries = contributions.setdefault(delta, {})
                        for j in range(p):
                            column = entries.setdefault((i, j), {})
                            idx = lam_index[_shift(gamma, j)]
                            column[idx] = column.get(idx, 0) + c * (gamma[j] + 1)
            for entries in contributions.values():
                for a in spec.annihilators:
                    row = [ZERO] * len(lam_monos)
                    for (i, j), column in entries.items():
                        w = a[i, j]
                        if w:
                            for idx, v in column.items():
                                row[idx] += w * v
                    if any(row):
                        rows.append(row)
    return kernel(RationalMatrix(tuple(rows), len(lam_monos)), f"E_{p} deg {m}")


def ring_eg_jet(g, k):
    """Jets λ with η⊗∇λ pointwise in 𝔤 for every basis field η of θ[G]₀ up to order k."""
    if k < 1:
        raise UserInputError(f"jet order must be at least 1, got {k}")
    p = g.p
    coords = JetCoordinates(p, 1, k, 0)
    fields_by_degree = {}
    for d in range(1, k + 1):
        sc = slice_coordinates(p, d)
        fields_by_degree[d] = [sc.components(row) for row in theta_g_degree(g, d).basis]

    vectors = []
    per_degree = {}
    for m in range(0, k + 1):
        if m == 0:
            solutions = [[Fraction(1)]]
            monos = [(0,) * p]
        else:
            sub = _ring_slice(g, m, fields_by_degree)
            solutions = sub.basis
            monos = homogeneous_monomials(p, m)
        per_degree[m] = len(solutions)
        for sol in solutions:
            v = [ZERO] * coords.dim
            for mono, c in zip(monos, sol):
                v[coords.index[mono]] = c
            vectors.append(v)
    basis = span(vectors, coords.label, coords.dim)
    log.debug(f"ring E[{g.spec}] at k={k}: dims {per_degree}")
    return GRingJet(g, k, basis, per_degree)


def ring_contains(ring, lam):
    coords = ring.coordinates()
    if lam.n != coords.n:
        raise DimensionMismatch(f"function in {lam.n} variables tested against a ring on R^{coords.n}")
    return ring.basis.contains(coords.vector([lam.truncate(ring.k)]))


def multiply_field(lam, eta):
    return GermJet(tuple(lam * comp for comp in eta.components), allow_constants=True)


def field_in_space(space, eta):
    """Membership of a field jet (truncated to space.k) in a GFieldSpace."""
    if eta.n != space.p or eta.p != space.p:
        raise DimensionMismatch(f"field on R^{eta.n} -> R^{eta.p} tested against θ[G] on R^{space.p}")
    for d in range(0, space.k + 1):
        part = eta.homogeneous_part(d)
        if all(c.is_zero() for c in part.components):
            continue
        if d not in space.per_degree:
            return False
        coords = slice_coordinates(space.p, d)
        comps = [c.with_order(d) for c in part.components]
        if not space.per_degree[d].contains(coords.vector(comps)):
            return False
    return True


def first_nonlinear_degree(g, k):
    for d in range(2, k + 1):
        if theta_g_degree(g, d).dim:
            return d
    return None


def is_linear_only(g, k):
    """True iff θ[G]₀ has no homogeneous fields of degree 2..k."""
    if k < 2:
        raise UserInputError(f"linearity check needs k >= 2, got {k}")
    return first_nonlinear_degree(g, k) is None
