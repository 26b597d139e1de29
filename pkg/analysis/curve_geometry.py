"""
Curve and surface germ geometry in double precision.

Square roots and fractional powers make the invariants here irrational, so jets are
converted to NumericJet (dense numpy coefficient arrays) and every comparison carries
an explicit tolerance. Differentiating a numeric jet lowers its order by one; products
and compositions live at the smaller order of their operands.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

import config
from analysis.jet_algebra import GermJet, JetPoly
from errors import GeometryError, InvariantViolation, UserInputError

log = logging.getLogger(__name__)

# rotation by +π/2
J = np.array([[0.0, -1.0], [1.0, 0.0]])
# the swap used to move an A_k second component into first position
J_SWAP = np.array([[0.0, 1.0], [-1.0, 0.0]])


@lru_cache(maxsize=None)
def _degree_mask(n, order):
    return np.indices((order + 1,) * n).sum(axis=0) <= order


@dataclass(frozen=True, eq=False)
class NumericJet:
    n: int
    order: int
    coeffs: np.ndarray

    # keep numpy scalars from broadcasting over a jet on the left of an operator
    __array_ufunc__ = None

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        shape = (self.order + 1,) * self.n
        if arr.shape != shape:
            raise UserInputError(f"numeric jet coefficients of shape {arr.shape}, expected {shape}")
        if not np.all(np.isfinite(arr)):
            raise GeometryError("numeric jet has non-finite coefficients")
        object.__setattr__(self, 'coeffs', np.where(_degree_mask(self.n, self.order), arr, 0.0))

    # --- constructors ---
    @classmethod
    def zeros(cls, n, order):
        return cls(n, order, np.zeros((order + 1,) * n))

    @classmethod
    def constant(cls, n, order, value):
        arr = np.zeros((order + 1,) * n)
        arr[(0,) * n] = value
        return cls(n, order, arr)

    @classmethod
    def variable(cls, n, order, i):
        arr = np.zeros((order + 1,) * n)
        if order >= 1:
            idx = [0] * n
            idx[i] = 1
            arr[tuple(idx)] = 1.0
        return cls(n, order, arr)

    @classmethod
    def from_jetpoly(cls, jet):
        arr = np.zeros((jet.order + 1,) * jet.n)
        for mono, c in jet.terms:
            arr[mono] = float(c)
        return cls(jet.n, jet.order, arr)

    @classmethod
    def univariate(cls, values):
        values = np.asarray(values, dtype=float)
        return cls(1, len(values) - 1, values)

    # --- views ---
    def coefficient(self, mono):
        mono = tuple(mono)
        if sum(mono) > self.order:
            return 0.0
        return float(self.coeffs[mono])

    def __getitem__(self, i):
        return self.coefficient((i,) if isinstance(i, int) else i)

    @property
    def constant_term(self):
        return float(self.coeffs[(0,) * self.n])

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def with_order(self, order):
        """Cut down, or pad with zero coefficients."""
        arr = np.zeros((order + 1,) * self.n)
        m = min(order, self.order) + 1
        sl = (slice(0, m),) * self.n
        arr[sl] = self.coeffs[sl]
        return NumericJet(self.n, order, arr)

    def truncate(self, order):
        return self.with_order(min(order, self.order))

    # --- arithmetic ---
    def _align(self, other):
        if isinstance(other, NumericJet):
            if other.n != self.n:
                raise UserInputError("numeric jets in different numbers of variables")
            order = min(self.order, other.order)
            return self.truncate(order), other.truncate(order)
        return self, NumericJet.constant(self.n, self.order, float(other))

    def __add__(self, other):
        a, b = self._align(other)
        return NumericJet(a.n, a.order, a.coeffs + b.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return NumericJet(self.n, self.order, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NumericJet):
            return NumericJet(self.n, self.order, self.coeffs * float(other))
        a, b = self._align(other)
        size = a.order + 1
        out = np.zeros_like(a.coeffs)
        for idx in zip(*np.nonzero(a.coeffs)):
            if sum(idx) > a.order:
                continue
            target = tuple(slice(i, size) for i in idx)
            source = tuple(slice(0, size - i) for i in idx)
            out[target] += a.coeffs[idx] * b.coeffs[source]
        return NumericJet(a.n, a.order, out)

    __rmul__ = __mul__

    def __truediv__(self, value):
        return self * (1.0 / float(value))

    def diff(self, i=0):
        if self.order == 0:
            return NumericJet.zeros(self.n, 0)
        weights = np.arange(1, self.order + 1, dtype=float)
        moved = np.moveaxis(self.coeffs, i, -1)[..., 1:] * weights
        arr = np.moveaxis(moved, -1, i)
        sl = (slice(0, self.order),) * self.n
        return NumericJet(self.n, self.order - 1, arr[sl])

    def compose(self, inner):
        """self∘inner; inner is a sequence of self.n numeric jets vanishing at 0."""
        inner = list(inner)
        if len(inner) != self.n:
            raise UserInputError(f"composition needs {self.n} inner jets, got {len(inner)}")
        m = inner[0].n
        order = min([self.order] + [c.order for c in inner])
        inner = [c.truncate(order) for c in inner]
        if any(abs(c.constant_term) > 0 for c in inner):
            raise GeometryError("inner jet of a composition must vanish at 0")
        powers = [[NumericJet.constant(m, order, 1.0)] for _ in inner]

        def power(j, e):
            cache = powers[j]
            while len(cache) <= e:
                cache.append(cache[-1] * inner[j])
            return cache[e]

        total = NumericJet.zeros(m, order)
        for idx in zip(*np.nonzero(self.coeffs)):
            if sum(idx) > order:
                continue
            term = NumericJet.constant(m, order, float(self.coeffs[idx]))
            for j, e in enumerate(idx):
                if e:
                    term = term * power(j, e)
            total = total + term
        return total

    def to_payload(self, digits=12):
        if self.n == 1:
            return [round(float(v), digits) for v in self.coeffs]
        out = {}
        for idx in zip(*np.nonzero(self.coeffs)):
            out[",".join(str(int(i)) for i in idx)] = round(float(self.coeffs[idx]), digits)
        return out


# --- univariate series ---

def _x(order):
    return NumericJet.variable(1, order, 0)


def shift_up(a, s):
    """x^s · a."""
    return NumericJet(1, a.order + s, np.concatenate([np.zeros(s), a.coeffs]))


def shift_down(a, s, tol=config.DEFAULT_TOL):
    """a / x^s; the first s coefficients must vanish."""
    if s > a.order:
        raise GeometryError(f"cannot factor x^{s} out of a jet of order {a.order}")
    if s and np.max(np.abs(a.coeffs[:s])) > tol:
        raise GeometryError(f"jet is not divisible by x^{s}")
    return NumericJet(1, a.order - s, a.coeffs[s:])


def series_pow(a, r):
    """a^r for a(0) > 0 (any real r) or a(0) != 0 (integer r)."""
    a0 = a.constant_term
    if a0 == 0:
        raise GeometryError("power series with zero constant term")
    if a0 < 0 and float(r) != int(r):
        raise GeometryError("fractional power of a series with negative constant term")
    c = a.coeffs
    b = np.zeros(a.order + 1)
    b[0] = a0 ** r
    for m in range(1, a.order + 1):
        k = np.arange(1, m + 1)
        b[m] = np.sum(((r + 1) * k - m) * c[k] * b[m - k]) / (m * a0)
    return NumericJet(1, a.order, b)


def signed_cbrt(a):
    """Real cube root of a series with a(0) != 0."""
    if a.constant_term < 0:
        return -series_pow(-a, 1.0 / 3.0)
    return series_pow(a, 1.0 / 3.0)


def integrate(a):
    """Antiderivative vanishing at 0, one order higher."""
    return NumericJet(1, a.order + 1, P.polyint(a.coeffs))


def compose1(a, b):
    """a∘b for univariate jets, b(0) = 0 (Horner)."""
    if abs(b.constant_term) > 0:
        raise GeometryError("inner series must vanish at 0")
    order = min(a.order, b.order)
    b = b.truncate(order)
    result = NumericJet.constant(1, order, a.coeffs[order])
    for i in range(order - 1, -1, -1):
        result = result * b + float(a.coeffs[i])
    return result


def revert(a):
    """Compositional inverse b with a(b(x)) = x; needs a(0) = 0, a'(0) != 0."""
    a1 = a.coefficient((1,))
    if abs(a.constant_term) > 0 or a1 == 0:
        raise GeometryError("series is not invertible at 0")
    x = _x(a.order)
    b = x / a1
    for _ in range(a.order):
        b = b - (compose1(a, b) - x) / a1
    return b


def _numeric_curve(f):
    if isinstance(f, GermJet):
        if f.n != 1 or f.p != 2:
            raise UserInputError(f"expected a plane curve germ (R,0)->(R^2,0), got n={f.n}, p={f.p}")
        return tuple(NumericJet.from_jetpoly(c) for c in f.components)
    comps = tuple(f)
    if len(comps) != 2:
        raise UserInputError("a plane curve has two components")
    order = min(c.order for c in comps)
    return tuple(c.truncate(order) for c in comps)


def _max_abs(*jets):
    return max((j.max_abs() for j in jets), default=0.0)


# --- A_k types and normal forms ---

@dataclass(frozen=True)
class AkType:
    k: int
    exact: bool

    def __str__(self):
        return f"A{self.k}" if self.exact else f"A>={self.k}"


def ak_type(f1):
    """A_k type of a one-variable jet: k + 1 is the first nonvanishing derivative order."""
    if f1.n != 1:
        raise UserInputError(f"A_k types are defined for one-variable jets, got n={f1.n}")
    if f1.constant_term:
        raise UserInputError("A_k type needs a jet vanishing at 0")
    v = f1.valuation()
    if v is None:
        return AkType(f1.order, False)
    return AkType(v - 1, True)


@dataclass(frozen=True, eq=False)
class AkNormalForm:
    k: int
    sign: int
    h: NumericJet
    phi: NumericJet
    rotated: bool
    residual: float
    order: int

    def to_payload(self):
        return {
            'k': self.k, 'type': f"A{self.k}", 'sign': self.sign, 'rotated': self.rotated,
            'h': self.h.to_payload(), 'phi': self.phi.to_payload(),
            'residual': float(self.residual), 'order': self.order,
        }


def ak_normalize(f, tol=config.DEFAULT_TOL):
    """Bring an A_k plane curve germ to (±x^{k+1}, x^{k+1} h(x)).

    Parameters
    ----------
    f : GermJet
        Exact curve germ (R,0) -> (R^2,0).
    tol : float
        Bound on the reconstruction residual.

    Returns
    -------
    form : AkNormalForm
        ``rotated`` records whether the A_k component was the second one, in which
        case the target was first turned by J_SWAP, i.e. (f1, f2) -> (f2, -f1).
    """
    if f.n != 1 or f.p != 2:
        raise UserInputError(f"A_k normal forms need a plane curve germ, got n={f.n}, p={f.p}")
    types = [ak_type(c) for c in f.components]
    exact = [t.k for t in types if t.exact]
    if not exact:
        raise GeometryError(f"no component has a finite A_k type up to order {f.order} "
                            f"({types[0]}, {types[1]})")
    k = min(exact)
    anchor = 0 if types[0].exact and types[0].k == k else 1
    rotated = anchor == 1
    comps = _numeric_curve(f)
    rot = J_SWAP if rotated else np.eye(2)
    a = comps[0] * rot[0, 0] + comps[1] * rot[0, 1]
    b = comps[0] * rot[1, 0] + comps[1] * rot[1, 1]
    order = a.order

    c = a.coefficient((k + 1,))
    sign = 1 if c > 0 else -1
    u = shift_down(a, k + 1, tol=0.0) / c
    psi = shift_up(series_pow(u, 1.0 / (k + 1)), 1) * abs(c) ** (1.0 / (k + 1))
    phi = revert(psi)
    # error terms of φ beyond its order only reach degrees > order after composition
    phi_full = phi.with_order(order)
    a_phi = compose1(a, phi_full)
    b_phi = compose1(b, phi_full)
    h = shift_down(b_phi, k + 1, tol=np.inf)

    target_a = shift_up(NumericJet.constant(1, order - k - 1, float(sign)), k + 1)
    target_b = shift_up(h, k + 1)
    residual = max((a_phi - target_a).max_abs(), (b_phi - target_b).max_abs())
    if residual > tol:
        raise InvariantViolation(f"A_k normal form reconstruction residual {residual:.3e} exceeds {tol:.1e}")
    return AkNormalForm(k, sign, h, phi, rotated, residual, order)


def normal_form_curve(k, sign, h):
    """(sign·x^{k+1}, x^{k+1} h) as a numeric curve."""
    first = shift_up(NumericJet.constant(1, h.order, float(sign)), k + 1)
    return first, shift_up(h, k + 1)


# --- curvature and frames ---

class InvariantKind(str, Enum):
    CURVATURE = 'regular_curvature'
    FRONTAL = 'frontal'
    EQUIAFFINE = 'equiaffine'


@dataclass(frozen=True, eq=False)
class CurveInvariants:
    kind: InvariantKind
    kappa: NumericJet | None = None
    ell: NumericJet | None = None
    beta: NumericJet | None = None
    kappa_e: NumericJet | None = None
    nu: tuple | None = None
    mu: tuple | None = None
    sign: int = 1
    residuals: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_payload(self):
        out = {'kind': self.kind.value, 'sign': self.sign,
               'residuals': {k: float(v) for k, v in self.residuals.items()}}
        for name in ('kappa', 'ell', 'beta', 'kappa_e'):
            jet = getattr(self, name)
            if jet is not None:
                out[name] = jet.to_payload()
        for name in ('nu', 'mu'):
            frame = getattr(self, name)
            if frame is not None:
                out[name] = [c.to_payload() for c in frame]
        for name, jet in self.extras.items():
            out[name] = jet.to_payload() if isinstance(jet, NumericJet) else jet
        return out


def _speed_squared(d1, d2):
    return d1 * d1 + d2 * d2


def curvature(f, tol=config.DEFAULT_TOL):
    """Signed curvature (f1'f2'' - f2'f1'') / |f'|^3 as a jet in the curve parameter."""
    f1, f2 = _numeric_curve(f)
    d1, d2 = f1.diff(), f2.diff()
    s1, s2 = d1.diff(), d2.diff()
    speed2 = _speed_squared(d1, d2)
    if speed2.constant_term <= tol:
        raise GeometryError("curve is singular at 0 (zero velocity)")
    return (d1 * s2 - d2 * s1) * series_pow(speed2, -1.5)


def arclength(f, tol=config.DEFAULT_TOL):
    """s(x) = ∫|f'| with s(0) = 0."""
    f1, f2 = _numeric_curve(f)
    speed2 = _speed_squared(f1.diff(), f2.diff())
    if speed2.constant_term <= tol:
        raise GeometryError("curve is singular at 0 (zero velocity)")
    return integrate(series_pow(speed2, 0.5))


def arclength_curvature(f, tol=config.DEFAULT_TOL):
    """κ as a jet in Euclidean arclength measured from the base point."""
    kappa = curvature(f, tol)
    x_of_s = revert(arclength(f, tol))
    return compose1(kappa, x_of_s)


def curvature_invariants(f, tol=config.DEFAULT_TOL):
    return CurveInvariants(InvariantKind.CURVATURE, kappa=curvature(f, tol),
                           extras={'kappa_arclength': arclength_curvature(f, tol)})


def frontal_invariants(k, sign, h, tol=config.DEFAULT_TOL):
    """Frame (ν, μ) and invariants (ℓ, β) of the A_k normal form (sign·x^{k+1}, x^{k+1}h).

    μ is the unit tangent direction (sign·(k+1), w)/√s with w = (k+1)h + x h' and
    s = (k+1)^2 + w^2; ν = Jμ. ℓ = ν'·μ and β = f'·μ are computed by differentiating
    the frame and compared with the closed forms
    ℓ = -sign·(k+1)·w'/s and β = x^k √s, where w' = (k+2)h' + x h''.
    The `ell_literature` extra carries sign·(k+1)·w'/s^{3/2}, the value displayed in
    the literature; it differs from the frame derivative by the factor -1/√s.
    """
    if sign not in (1, -1):
        raise UserInputError(f"normal form sign must be ±1, got {sign}")
    if h.n != 1:
        raise UserInputError("h must be a one-variable jet")
    if h.order < 1:
        raise GeometryError("frontal invariants need h to order at least 1")
    a = float(sign * (k + 1))
    hp = h.diff()
    w = h * float(k + 1) + shift_up(hp, 1)
    s = w * w + (k + 1) ** 2
    inv_root = series_pow(s, -0.5)
    mu = (inv_root * a, w * inv_root)
    nu = (-mu[1], mu[0])

    nu_dot = (nu[0].diff(), nu[1].diff())
    mu_dot = (mu[0].diff(), mu[1].diff())
    ell = nu_dot[0] * mu[0] + nu_dot[1] * mu[1]

    f_dot = (shift_up(NumericJet.constant(1, w.order, a), k), shift_up(w, k))
    beta = f_dot[0] * mu[0] + f_dot[1] * mu[1]

    w_prime = hp * float(k + 2) + shift_up(hp.diff(), 1) if h.order >= 2 else hp * float(k + 2)
    ell_closed = -(w_prime * series_pow(s, -1.0)) * a
    ell_literature = w_prime * series_pow(s, -1.5) * a
    beta_closed = shift_up(series_pow(s, 0.5), k)

    residuals = {
        'frenet_nu': _max_abs(nu_dot[0] - ell * mu[0], nu_dot[1] - ell * mu[1]),
        'frenet_mu': _max_abs(mu_dot[0] + ell * nu[0], mu_dot[1] + ell * nu[1]),
        'frenet_f': _max_abs(f_dot[0] - beta * mu[0], f_dot[1] - beta * mu[1]),
        'unit_mu': (mu[0] * mu[0] + mu[1] * mu[1] - 1.0).max_abs(),
        'unit_nu': (nu[0] * nu[0] + nu[1] * nu[1] - 1.0).max_abs(),
        'orthogonal': (nu[0] * mu[0] + nu[1] * mu[1]).max_abs(),
        'ell_closed_form': (ell - ell_closed).max_abs(),
        'beta_closed_form': (beta - beta_closed).max_abs(),
    }
    worst = max(residuals, key=residuals.get)
    if residuals[worst] > tol:
        raise InvariantViolation(f"frontal invariant check '{worst}' off by {residuals[worst]:.3e}")
    extras = {'ell_closed_form': ell_closed, 'ell_literature': ell_literature, 'beta_closed_form': beta_closed}
    return CurveInvariants(InvariantKind.FRONTAL, ell=ell, beta=beta, nu=nu, mu=mu, sign=sign,
                           residuals=residuals, extras=extras)


# --- equi-affine geometry ---

def _affine_speed(f, tol):
    f1, f2 = _numeric_curve(f)
    d1, d2 = f1.diff(), f2.diff()
    det = d1 * d2.diff() - d2 * d1.diff()
    if abs(det.constant_term) <= tol:
        raise GeometryError("curve has an inflection (or is degenerate) at 0: det(f', f'') = 0")
    return (d1, d2), signed_cbrt(det)


def equiaffine_arclength(f, tol=config.DEFAULT_TOL):
    """σ(x) with dσ/dx = det(f', f'')^{1/3} (real cube root), σ(0) = 0."""
    _, q = _affine_speed(f, tol)
    return integrate(q)


def equiaffine_curvature(f, param='sigma', tol=config.DEFAULT_TOL):
    """κ^e = det(f_σσ, f_σσσ) with det(f_σ, f_σσ) = 1.

    param='sigma' returns the jet in equi-affine arclength, param='x' in the curve
    parameter. The real cube root makes σ, and hence κ^e, independent of the
    orientation of the parameter.
    """
    (d1, d2), q = _affine_speed(f, tol)
    inv_q = series_pow(q, -1.0)
    t1 = (d1 * inv_q, d2 * inv_q)
    t2 = (t1[0].diff() * inv_q, t1[1].diff() * inv_q)
    t3 = (t2[0].diff() * inv_q, t2[1].diff() * inv_q)
    kappa = t2[0] * t3[1] - t2[1] * t3[0]
    if param == 'x':
        return kappa
    if param != 'sigma':
        raise UserInputError(f"unknown parameter '{param}', expected sigma or x")
    return compose1(kappa, revert(integrate(q)))


def equiaffine_invariants(f, tol=config.DEFAULT_TOL):
    return CurveInvariants(InvariantKind.EQUIAFFINE, kappa_e=equiaffine_curvature(f, 'sigma', tol),
                           extras={'kappa_e_x': equiaffine_curvature(f, 'x', tol)})


# --- congruence ---

class CongruenceMode(str, Enum):
    EUCLIDEAN = 'euclidean'
    EQUIAFFINE = 'equiaffine'


@dataclass(frozen=True, eq=False)
class CongruenceResult:
    mode: CongruenceMode
    match: bool
    phi: NumericJet | None = None
    sig: int | None = None
    matrix: tuple | None = None
    residual: float | None = None
    obstruction_degree: int | None = None
    compared_order: int = 0

    def to_payload(self):
        return {
            'mode': self.mode.value, 'match': self.match, 'sig': self.sig,
            'phi': self.phi.to_payload() if self.phi is not None else None,
            'matrix': [[round(float(v), 12) for v in row] for row in self.matrix] if self.matrix else None,
            'residual': float(self.residual) if self.residual is not None else None,
            'obstruction_degree': self.obstruction_degree, 'compared_order': self.compared_order,
        }


def _first_mismatch(a, b, tol):
    order = min(a.order, b.order)
    for j in range(order + 1):
        x, y = a.coeffs[j], b.coeffs[j]
        if abs(x - y) > tol * max(1.0, abs(x), abs(y)):
            return j
    return None


def _reflect_parameter(a, sig):
    """a(sig·s)."""
    if sig == 1:
        return a
    return NumericJet(1, a.order, a.coeffs * (-1.0) ** np.arange(a.order + 1))


def _apply_matrix(m, curve):
    c1, c2 = curve
    return (c1 * m[0, 0] + c2 * m[0, 1], c1 * m[1, 0] + c2 * m[1, 1])


def _frame(curve):
    c1, c2 = curve
    return np.array([[c1.coefficient((1,)), c1.coefficient((2,)) * 2.0],
                     [c2.coefficient((1,)), c2.coefficient((2,)) * 2.0]])


def _special_linear(matrix, tol):
    return abs(float(np.linalg.det(matrix)) - 1.0) <= tol


def congruence_test(f, g, mode, k=None, tol=config.AMPLIFIED_TOL):
    """Decide whether g = A·(f∘φ) for A in SO(2) (euclidean) or SL(2) (equiaffine).

    Invariants are compared as jets in arclength (Euclidean, both parameter
    orientations) or equi-affine arclength; on a match φ is recovered as
    x_f∘(±s_g) and A from the first derivatives, and the residual is the largest
    coefficient of A·(f∘φ) - g.
    """
    mode = CongruenceMode(mode)
    fc = _numeric_curve(f)
    gc = _numeric_curve(g)
    if k is not None:
        fc = tuple(c.truncate(k) for c in fc)
        gc = tuple(c.truncate(k) for c in gc)
    if mode is CongruenceMode.EUCLIDEAN:
        inv_f, inv_g = arclength_curvature(fc), arclength_curvature(gc)
        s_f, s_g = arclength(fc), arclength(gc)
        signs = (1, -1)
    else:
        inv_f, inv_g = equiaffine_curvature(fc, 'sigma'), equiaffine_curvature(gc, 'sigma')
        s_f, s_g = equiaffine_arclength(fc), equiaffine_arclength(gc)
        signs = (1,)

    compared = min(inv_f.order, inv_g.order)
    obstruction = None
    for sig in signs:
        expected = _reflect_parameter(inv_f, sig) * float(sig) if mode is CongruenceMode.EUCLIDEAN else inv_f
        mismatch = _first_mismatch(inv_g, expected, tol)
        if mismatch is not None:
            obstruction = mismatch if obstruction is None else max(obstruction, mismatch)
            continue
        x_f = revert(s_f)
        phi = compose1(x_f, s_g * float(sig))
        pulled = tuple(compose1(c, phi) for c in fc)
        order = min(pulled[0].order, gc[0].order)
        pulled = tuple(c.truncate(order) for c in pulled)
        target = tuple(c.truncate(order) for c in gc)
        if mode is CongruenceMode.EUCLIDEAN:
            u = np.array([pulled[0].coefficient((1,)), pulled[1].coefficient((1,))])
            v = np.array([target[0].coefficient((1,)), target[1].coefficient((1,))])
            angle = np.arctan2(v[1], v[0]) - np.arctan2(u[1], u[0])
            matrix = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        else:
            matrix = _frame(target) @ np.linalg.inv(_frame(pulled))
            if not _special_linear(matrix, tol):
                log.debug(f"recovered matrix has det {np.linalg.det(matrix):.6g}, not in SL(2)")
                continue
        moved = _apply_matrix(matrix, pulled)
        residual = _max_abs(moved[0] - target[0], moved[1] - target[1])
        sign_phi = 1 if phi.coefficient((1,)) > 0 else -1
        if residual <= tol * max(1.0, _max_abs(*target)):
            return CongruenceResult(mode, True, phi, sign_phi, tuple(map(tuple, matrix)), residual, None, compared)
        log.debug(f"invariants agree but reconstruction residual is {residual:.3e}")
    return CongruenceResult(mode, False, obstruction_degree=obstruction, compared_order=compared)


# --- Monge form ---

@dataclass(frozen=True, eq=False)
class MongeForm:
    lambda1: float
    lambda2: float
    cubic: tuple
    rotation: np.ndarray
    residual: float
    h: NumericJet
    notes: tuple = ()

    @property
    def principal_curvatures(self):
        return (2.0 * self.lambda1, 2.0 * self.lambda2)

    def to_payload(self):
        return {
            'lambda1': round(self.lambda1, 12), 'lambda2': round(self.lambda2, 12),
            'principal_curvatures': [round(v, 12) for v in self.principal_curvatures],
            'cubic': {name: round(v, 12) for name, v in zip(('a30', 'a21', 'a12', 'a03'), self.cubic)},
            'rotation': [[round(float(v), 12) for v in row] for row in self.rotation],
            'residual': float(self.residual), 'h': self.h.to_payload(), 'notes': list(self.notes),
        }


def _rotate3(m, comps):
    return [comps[0] * m[i, 0] + comps[1] * m[i, 1] + comps[2] * m[i, 2] for i in range(3)]


def _invert_plane_map(g1, g2):
    """φ with (g1, g2)∘φ = identity, by fixed-point iteration on the nonlinear part."""
    order = g1.order
    lin = np.array([[g1.coefficient((1, 0)), g1.coefficient((0, 1))],
                    [g2.coefficient((1, 0)), g2.coefficient((0, 1))]])
    inv = np.linalg.inv(lin)
    u = [NumericJet.variable(2, order, 0), NumericJet.variable(2, order, 1)]
    nonlinear = [g1 - (u[0] * lin[0, 0] + u[1] * lin[0, 1]), g2 - (u[0] * lin[1, 0] + u[1] * lin[1, 1])]
    phi = [u[0] * inv[0, 0] + u[1] * inv[0, 1], u[0] * inv[1, 0] + u[1] * inv[1, 1]]
    for _ in range(order):
        r = [u[i] - nonlinear[i].compose(phi) for i in range(2)]
        phi = [r[0] * inv[0, 0] + r[1] * inv[0, 1], r[0] * inv[1, 0] + r[1] * inv[1, 1]]
    return phi


def _graph_reduce(comps, rot):
    g = _rotate3(rot, comps)
    phi = _invert_plane_map(g[0], g[1])
    return phi, g[2].compose(phi)


def _magnitude(jet):
    return NumericJet(jet.n, jet.order, np.abs(jet.coeffs))


def _recomposition_scale(comps, phi, cond):
    """Bound on the coefficient sizes summed while forming comps∘phi, times cond(df(0)).

    Rounding in the plane-map inversion and in the composition both grow with this
    bound, so recomposition residuals are measured against it.
    """
    inner = [_magnitude(c) for c in phi]
    bound = max(_magnitude(c).compose(inner).max_abs() for c in comps)
    return (1.0 + bound) * cond


def monge_normal_form(f, tol=config.MONGE_TOL, immersion_tol=config.IMMERSION_TOL):
    """ℛ×SO(3) reduction of an immersed surface germ to (x1, x2, λ1 x1² + λ2 x2² + cubic + ...).

    Conventions fixing the remaining symmetries: the normal is oriented so that
    λ1 + λ2 ≥ 0, λ1 ≥ λ2, the in-plane frame is right-handed, and its overall sign
    makes the first non-negligible cubic coefficient (a30, a21, a12, a03) positive.

    The reported residual is relative: the recomposition error is divided by the
    size of the terms summed to form it and by the condition number of df(0).
    """
    if f.n != 2 or f.p != 3:
        raise UserInputError(f"Monge form needs a surface germ (R^2,0)->(R^3,0), got n={f.n}, p={f.p}")
    comps = [NumericJet.from_jetpoly(c) for c in f.components]
    lin = np.array([[c.coefficient((1, 0)), c.coefficient((0, 1))] for c in comps])
    singular = np.linalg.svd(lin, compute_uv=False)
    if singular[-1] <= immersion_tol:
        raise GeometryError("germ is not an immersion at 0 (df(0) has rank < 2)")
    cond = float(singular[0] / singular[-1])
    q, r = np.linalg.qr(lin)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    q = q * signs
    rot = np.vstack([q[:, 0], q[:, 1], np.cross(q[:, 0], q[:, 1])])

    phi, h = _graph_reduce(comps, rot)
    notes = []
    trace = h.coefficient((2, 0)) + h.coefficient((0, 2))
    if trace < -tol:
        rot = np.diag([1.0, -1.0, -1.0]) @ rot
        phi, h = _graph_reduce(comps, rot)
    elif abs(trace) <= tol:
        notes.append("mean curvature vanishes: normal orientation fixed by the parametrization")

    quad = np.array([[h.coefficient((2, 0)), h.coefficient((1, 1)) / 2.0],
                     [h.coefficient((1, 1)) / 2.0, h.coefficient((0, 2))]])
    eigvals, eigvecs = np.linalg.eigh(quad)
    frame = eigvecs[:, ::-1].copy()
    if np.linalg.det(frame) < 0:
        frame[:, 1] *= -1.0
    if abs(eigvals[1] - eigvals[0]) <= tol:
        notes.append("umbilic: cubic coefficients depend on the in-plane frame")

    def reframe(frame):
        v = [NumericJet.variable(2, h.order, 0), NumericJet.variable(2, h.order, 1)]
        inner = [v[0] * frame[0, 0] + v[1] * frame[0, 1], v[0] * frame[1, 0] + v[1] * frame[1, 1]]
        return h.compose(inner), inner

    h_tilde, inner = reframe(frame)
    cubic = [h_tilde.coefficient(m) for m in ((3, 0), (2, 1), (1, 2), (0, 3))]
    lead = next((c for c in cubic if abs(c) > tol), 0.0)
    if lead < 0:
        frame = -frame
        h_tilde, inner = reframe(frame)
        cubic = [h_tilde.coefficient(m) for m in ((3, 0), (2, 1), (1, 2), (0, 3))]

    block = np.eye(3)
    block[:2, :2] = frame.T
    rotation = block @ rot
    full_phi = [c.compose(inner) for c in phi]
    moved = _rotate3(rotation, [c.compose(full_phi) for c in comps])
    order = moved[0].order
    v = [NumericJet.variable(2, order, 0), NumericJet.variable(2, order, 1)]
    recomposition = max(
        (moved[0] - v[0]).max_abs(),
        (moved[1] - v[1]).max_abs(),
        (moved[2] - h_tilde.truncate(order)).max_abs(),
    ) / _recomposition_scale(comps, full_phi, cond)
    residual = max(
        recomposition,
        abs(h_tilde.coefficient((1, 1))) / (1.0 + np.max(np.abs(quad))),
        float(np.max(np.abs(rotation @ rotation.T - np.eye(3)))),
        abs(np.linalg.det(rotation) - 1.0),
    )
    if residual > tol:
        raise InvariantViolation(f"Monge reduction residual {residual:.3e} exceeds {tol:.1e}")
    lambda1 = h_tilde.coefficient((2, 0))
    lambda2 = h_tilde.coefficient((0, 2))
    return MongeForm(lambda1, lambda2, tuple(cubic), rotation, residual, h_tilde, tuple(notes))
