"""
Exact truncated polynomial arithmetic.

A JetPoly models an element of E_n mod M_n^{k+1} with Fraction coefficients; a GermJet
is a p-tuple of JetPolys in the same n variables and order. Everything here is exact.

Variable indices are 0-based in the API: index 0 is the variable written ``x1``.
Monomials are exponent tuples and are ordered graded-lexicographically (total degree
first, then lexicographic with variable 1 highest), so in two variables the order is
1, x1, x2, x1^2, x1*x2, x2^2, ...
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Mapping, Sequence

from errors import DimensionMismatch, UserInputError

Monomial = tuple[int, ...]


def monomial_key(mono):
    return (sum(mono), tuple(-e for e in mono))


@lru_cache(maxsize=None)
def homogeneous_monomials(n, d):
    """All degree-d exponent tuples in n variables, in graded-lex order."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in homogeneous_monomials(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_basis(n, k, min_degree=0):
    """Monomials of degree min_degree..k in n variables, graded-lex ordered."""
    if n < 1 or k < 0 or min_degree < 0:
        raise UserInputError(f"invalid monomial basis request n={n}, k={k}, min={min_degree}")
    out = []
    for d in range(min_degree, k + 1):
        out.extend(homogeneous_monomials(n, d))
    return out


def monomial_count(n, k, min_degree=0):
    return sum(comb(d + n - 1, n - 1) for d in range(min_degree, k + 1))


def format_monomial(mono, prefix='x'):
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"{prefix}{i + 1}")
        elif e > 1:
            parts.append(f"{prefix}{i + 1}^{e}")
    return "*".join(parts) if parts else "1"


def _as_fraction(value):
    if isinstance(value, float):
        raise UserInputError(f"floating-point coefficient {value!r} in exact jet")
    return Fraction(value)


@dataclass(frozen=True)
class JetPoly:
    n: int
    order: int
    terms: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch(f"jet needs at least one variable, got n={self.n}")
        if self.order < 0:
            raise DimensionMismatch(f"negative jet order {self.order}")
        merged = {}
        for mono, c in self.terms:
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.n or min(mono) < 0:
                raise DimensionMismatch(f"monomial {mono} does not live in {self.n} variables")
            if sum(mono) > self.order:
                continue
            merged[mono] = merged.get(mono, 0) + _as_fraction(c)
        terms = tuple(sorted(((m, c) for m, c in merged.items() if c), key=lambda t: monomial_key(t[0])))
        object.__setattr__(self, 'terms', terms)

    # --- constructors ---
    @classmethod
    def from_dict(cls, n, order, coeffs: Mapping):
        return cls(n, order, tuple(coeffs.items()))

    @classmethod
    def zero(cls, n, order):
        return cls(n, order)

    @classmethod
    def constant(cls, n, order, c):
        return cls(n, order, (((0,) * n, c),))

    @classmethod
    def monomial(cls, n, order, mono, c=1):
        return cls(n, order, ((tuple(mono), c),))

    @classmethod
    def variable(cls, n, order, i):
        mono = [0] * n
        mono[i] = 1
        return cls(n, order, ((tuple(mono), 1),))

    # --- views ---
    @cached_property
    def coeffs(self):
        return dict(self.terms)

    def coefficient(self, mono):
        return self.coeffs.get(tuple(mono), Fraction(0))

    @property
    def constant_term(self):
        return self.coefficient((0,) * self.n)

    def is_zero(self):
        return not self.terms

    def valuation(self):
        """Lowest degree carrying a nonzero coefficient, None for the zero jet."""
        return sum(self.terms[0][0]) if self.terms else None

    def degree_part(self, d):
        return JetPoly(self.n, self.order, tuple((m, c) for m, c in self.terms if sum(m) == d))

    def truncate(self, order):
        return JetPoly(self.n, min(order, self.order), self.terms)

    def with_order(self, order):
        """Re-label the order; terms above the new order are dropped."""
        return JetPoly(self.n, order, self.terms)

    # --- arithmetic ---
    def __add__(self, other):
        return jp_add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return JetPoly(self.n, self.order, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return jp_add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return jp_add(_coerce(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, JetPoly):
            return jp_mul(self, other)
        c = _as_fraction(other)
        return JetPoly(self.n, self.order, tuple((m, c * v) for m, v in self.terms))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = JetPoly.constant(self.n, self.order, 1)
        for _ in range(e):
            result = jp_mul(result, self)
        return result

    def diff(self, i):
        return jp_diff(self, i)

    def __str__(self):
        return format_jet(self)


def _coerce(value, like):
    if isinstance(value, JetPoly):
        return value
    return JetPoly.constant(like.n, like.order, value)


def _check_compatible(a, b):
    if a.n != b.n or a.order != b.order:
        raise DimensionMismatch(f"jets differ: (n={a.n}, k={a.order}) vs (n={b.n}, k={b.order})")


def jp_add(a, b):
    _check_compatible(a, b)
    return JetPoly(a.n, a.order, a.terms + b.terms)


def jp_mul(a, b):
    _check_compatible(a, b)
    k = a.order
    out = {}
    for ma, ca in a.terms:
        da = sum(ma)
        for mb, cb in b.terms:
            if da + sum(mb) > k:
                break
            mono = tuple(x + y for x, y in zip(ma, mb))
            out[mono] = out.get(mono, 0) + ca * cb
    return JetPoly(a.n, k, tuple(out.items()))


def jp_diff(a, i):
    """Partial derivative in variable i (0-based). The order label is kept; the top
    degree of the result is incomplete and callers compare at order k-1."""
    if not 0 <= i < a.n:
        raise DimensionMismatch(f"variable index {i} out of range for n={a.n}")
    terms = []
    for mono, c in a.terms:
        e = mono[i]
        if e:
            lowered = mono[:i] + (e - 1,) + mono[i + 1:]
            terms.append((lowered, c * e))
    return JetPoly(a.n, a.order, tuple(terms))


def jp_compose(outer, inner):
    """Jet of outer∘inner. `inner` is a GermJet (or sequence of JetPolys) with zero
    constant terms; the result lives at the smaller of the two orders."""
    comps = inner.components if isinstance(inner, GermJet) else tuple(inner)
    if len(comps) != outer.n:
        raise DimensionMismatch(f"outer has {outer.n} variables but inner has {len(comps)} components")
    n = comps[0].n
    order = min([outer.order] + [c.order for c in comps])
    comps = [c.truncate(order) for c in comps]
    for c in comps:
        if c.n != n:
            raise DimensionMismatch("inner components disagree on the source dimension")
        if c.constant_term:
            raise UserInputError("cannot compose with a jet that has a nonzero constant term")

    powers = [[JetPoly.constant(n, order, 1)] for _ in comps]

    def power(j, e):
        cache = powers[j]
        while len(cache) <= e:
            cache.append(jp_mul(cache[-1], comps[j]))
        return cache[e]

    acc = {}
    for mono, coef in outer.terms:
        if sum(mono) > order:
            break
        term = None
        for j, e in enumerate(mono):
            if e:
                term = power(j, e) if term is None else jp_mul(term, power(j, e))
        if term is None:
            acc[(0,) * n] = acc.get((0,) * n, 0) + coef
            continue
        for m, c in term.terms:
            acc[m] = acc.get(m, 0) + coef * c
    return JetPoly(n, order, tuple(acc.items()))


def format_jet(a, prefix='x'):
    if not a.terms:
        return "0"
    pieces = []
    for mono, c in a.terms:
        sign = '-' if c < 0 else '+'
        mag = abs(c)
        body = format_monomial(mono, prefix)
        if body == "1":
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        pieces.append((sign, text))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == '-' else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


@dataclass(frozen=True)
class GermJet:
    """p-tuple of JetPolys sharing n and order. Germs vanish at 0; vector-field jets
    set allow_constants."""
    components: tuple
    allow_constants: bool = False

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise DimensionMismatch("a germ needs at least one component")
        n, order = comps[0].n, comps[0].order
        for c in comps:
            if c.n != n or c.order != order:
                raise DimensionMismatch("germ components disagree on n or order")
        if not self.allow_constants:
            for i, c in enumerate(comps):
                if c.constant_term:
                    raise UserInputError(f"component {i + 1} has a nonzero constant term")
        object.__setattr__(self, 'components', comps)

    @property
    def n(self):
        return self.components[0].n

    @property
    def p(self):
        return len(self.components)

    @property
    def order(self):
        return self.components[0].order

    @classmethod
    def from_dicts(cls, n, order, dicts, allow_constants=False):
        return cls(tuple(JetPoly.from_dict(n, order, d) for d in dicts), allow_constants)

    @classmethod
    def identity(cls, n, order):
        return cls(tuple(JetPoly.variable(n, order, i) for i in range(n)))

    @classmethod
    def zero(cls, n, p, order):
        return cls(tuple(JetPoly.zero(n, order) for _ in range(p)))

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def truncate(self, order):
        return GermJet(tuple(c.truncate(order) for c in self.components), self.allow_constants)

    def __add__(self, other):
        if self.p != other.p:
            raise DimensionMismatch("cannot add germs with different targets")
        return GermJet(tuple(a + b for a, b in zip(self, other)),
                       self.allow_constants or other.allow_constants)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return GermJet(tuple(comp * c for comp in self), self.allow_constants)

    def apply_matrix(self, matrix):
        """A·f for a p×p (or q×p) matrix given as rows."""
        rows = [list(r) for r in matrix]
        if any(len(r) != self.p for r in rows):
            raise DimensionMismatch(f"matrix width does not match target dimension {self.p}")
        out = []
        for row in rows:
            acc = JetPoly.zero(self.n, self.order)
            for a, comp in zip(row, self.components):
                if a:
                    acc = acc + comp * a
            out.append(acc)
        return GermJet(tuple(out), self.allow_constants)

    def compose(self, phi):
        """f∘φ for a source jet φ with phi.p == self.n."""
        if phi.p != self.n:
            raise DimensionMismatch(f"cannot precompose a germ in {self.n} variables with a map into R^{phi.p}")
        return GermJet(tuple(jp_compose(c, phi) for c in self.components), self.allow_constants)

    def linear_part(self):
        """p×n matrix of first-order coefficients."""
        units = [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]
        return [[c.coefficient(u) for u in units] for c in self.components]

    def homogeneous_part(self, d):
        return GermJet(tuple(c.degree_part(d) for c in self.components), allow_constants=True)

    def valuation(self):
        vals = [c.valuation() for c in self.components if not c.is_zero()]
        return min(vals) if vals else None

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def jacobian(f):
    """Entry (i, j) is d f_i / d x_j."""
    return tuple(tuple(jp_diff(c, j) for j in range(f.n)) for c in f.components)


@dataclass(frozen=True)
class JetCoordinates:
    """Coordinates on jets of p-tuples in n variables, degrees min_degree..order,
    component-major and graded-lex inside each component."""
    n: int
    p: int
    order: int
    min_degree: int = 0

    @cached_property
    def monomials(self):
        if self.min_degree > self.order:
            return ()
        return tuple(monomial_basis(self.n, self.order, self.min_degree))

    @cached_property
    def index(self):
        return {m: i for i, m in enumerate(self.monomials)}

    @property
    def dim(self):
        return self.p * len(self.monomials)

    @property
    def label(self):
        return f"theta(n={self.n},p={self.p},k={self.order},min={self.min_degree})"

    def vector(self, components: Sequence):
        if len(components) != self.p:
            raise DimensionMismatch(f"expected {self.p} components, got {len(components)}")
        width = len(self.monomials)
        v = [Fraction(0)] * self.dim
        for i, comp in enumerate(components):
            if comp.n != self.n:
                raise DimensionMismatch(f"component in {comp.n} variables, coordinates need {self.n}")
            for mono, c in comp.terms:
                d = sum(mono)
                if d > self.order:
                    continue
                if d < self.min_degree:
                    raise DimensionMismatch(f"term {format_monomial(mono)} lies below degree {self.min_degree}")
                v[i * width + self.index[mono]] = c
        return v

    def components(self, vector):
        width = len(self.monomials)
        out = []
        for i in range(self.p):
            chunk = vector[i * width:(i + 1) * width]
            out.append(JetPoly(self.n, self.order, tuple(zip(self.monomials, chunk))))
        return tuple(out)

    def coordinate_name(self, pos):
        width = len(self.monomials)
        comp, idx = divmod(pos, width)
        slots = ["0"] * self.p
        slots[comp] = format_monomial(self.monomials[idx])
        return "(" + ", ".join(slots) + ")"
