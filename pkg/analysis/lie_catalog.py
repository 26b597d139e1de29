"""
Catalog of linear Lie groups G ⊂ GL(p), represented by their Lie algebras.

Each algebra is the common kernel of a list of linear functionals on M_p (the
annihilators, stored as p×p coefficient matrices paired with X by sum of entrywise
products). The basis is derived from the annihilators, so both views always agree.
Group elements are only needed for invariance tests; `sample_group_element` builds
rational ones from shears, block forms and Pythagorean rotations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from analysis.exact_linalg import (
    ONE, ZERO, RationalMatrix, commutator, det, inverse, kernel, matmul, rank, span,
)
from errors import DimensionMismatch, UserInputError

# kind -> number of integer parameters in the CLI spec
KINDS = {
    'gl': 1, 'sl': 1, 'so': 1, 'sp': 1, 'lagr': 1, 'trivial': 1, 'affplus': 1,
    'dstar': 2, 'tstar': 2, 'istar': 2, 'socaptstar': 2,
}

DISPLAY = {
    'gl': 'GL', 'sl': 'SL', 'so': 'SO', 'sp': 'Sp', 'dstar': 'D*', 'tstar': 'T*_r',
    'istar': 'I*', 'affplus': '(1+,GL)', 'lagr': 'L', 'socaptstar': 'SO∩T*_r', 'trivial': '{I}',
}


@dataclass(frozen=True, order=True)
class GroupId:
    kind: str
    dims: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UserInputError(f"unknown group kind '{self.kind}'")
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != KINDS[self.kind]:
            raise UserInputError(f"group '{self.kind}' takes {KINDS[self.kind]} size parameter(s), got {len(dims)}")
        if any(d < 1 for d in dims):
            raise UserInputError(f"group sizes must be positive, got {dims}")
        if self.kind in ('sp', 'lagr') and dims[0] % 2:
            raise UserInputError(f"{self.kind} needs an even ambient dimension, got {dims[0]}")
        object.__setattr__(self, 'dims', dims)

    @property
    def p(self):
        if self.kind == 'affplus':
            return 1 + self.dims[0]
        return sum(self.dims)

    @property
    def spec(self):
        return f"{self.kind}:{','.join(str(d) for d in self.dims)}"

    @property
    def display(self):
        return f"{DISPLAY[self.kind]}({','.join(str(d) for d in self.dims)})"

    def __str__(self):
        return self.spec


def parse_group_spec(text):
    """'so:3' -> GroupId('so', (3,)); 'dstar:1,2' -> GroupId('dstar', (1, 2))."""
    if not text or ':' not in text:
        raise UserInputError(f"group spec '{text}' must look like kind:size, e.g. so:3 or dstar:1,2")
    kind, _, sizes = text.strip().lower().partition(':')
    try:
        dims = tuple(int(s) for s in sizes.replace(' ', '').split(',') if s)
    except ValueError:
        raise UserInputError(f"group spec '{text}' has non-integer sizes") from None
    return GroupId(kind.strip(), dims)


def catalog_groups(p):
    """Every catalog entry acting on R^p."""
    groups = [GroupId('gl', (p,)), GroupId('sl', (p,)), GroupId('so', (p,)), GroupId('trivial', (p,))]
    if p % 2 == 0:
        groups += [GroupId('sp', (p,)), GroupId('lagr', (p,))]
    for p1 in range(1, p):
        for kind in ('dstar', 'tstar', 'istar', 'socaptstar'):
            groups.append(GroupId(kind, (p1, p - p1)))
    if p >= 2:
        groups.append(GroupId('affplus', (p - 1,)))
    return groups


def symplectic_form(size):
    m = size // 2
    rows = [[ZERO] * size for _ in range(size)]
    for i in range(m):
        rows[i][m + i] = ONE
        rows[m + i][i] = -ONE
    return RationalMatrix.from_rows(rows, size)


def _entry_functional(p, i, j, coeff=ONE):
    rows = [[ZERO] * p for _ in range(p)]
    rows[i][j] = coeff
    return rows


def _sum_functionals(p, *pieces):
    rows = [[ZERO] * p for _ in range(p)]
    for piece in pieces:
        for i in range(p):
            for j in range(p):
                rows[i][j] += piece[i][j]
    return rows


def _functionals_of_map(p, linear_map, entries):
    """Functionals X ↦ linear_map(X)[i][j] for (i, j) in entries, read off on unit matrices."""
    images = {(a, b): linear_map(RationalMatrix.unit(p, a, b)) for a in range(p) for b in range(p)}
    out = []
    for i, j in entries:
        out.append([[images[(a, b)][i, j] for b in range(p)] for a in range(p)])
    return out


def _so_annihilators(p, offset=0, size=None):
    size = p if size is None else size
    out = []
    for i in range(offset, offset + size):
        for j in range(i, offset + size):
            out.append(_sum_functionals(p, _entry_functional(p, i, j), _entry_functional(p, j, i)))
    return out


def _block_zero(p, rows_range, cols_range):
    return [_entry_functional(p, i, j) for i in rows_range for j in cols_range]


def _annihilators(g):
    p = g.p
    kind = g.kind
    if kind == 'gl':
        return []
    if kind == 'trivial':
        return _block_zero(p, range(p), range(p))
    if kind == 'sl':
        return [[[ONE if i == j else ZERO for j in range(p)] for i in range(p)]]
    if kind == 'so':
        return _so_annihilators(p)
    if kind == 'sp':
        jmat = symplectic_form(p)

        def form(x):
            return matmul(x.transpose(), jmat) + matmul(jmat, x)
        return _functionals_of_map(p, form, [(i, j) for i in range(p) for j in range(i + 1, p)])
    p1 = g.dims[0]
    if kind == 'dstar':
        return _block_zero(p, range(p1), range(p1, p)) + _block_zero(p, range(p1, p), range(p1))
    if kind == 'tstar':
        return _block_zero(p, range(p1, p), range(p1))
    if kind == 'istar':
        return _block_zero(p, range(p1), range(p)) + _block_zero(p, range(p1, p), range(p1))
    if kind == 'socaptstar':
        p2 = g.dims[1]
        return (_block_zero(p, range(p1), range(p1, p)) + _block_zero(p, range(p1, p), range(p1))
                + _so_annihilators(p, 0, p1) + _so_annihilators(p, p1, p2))
    if kind == 'affplus':
        return _block_zero(p, range(p), range(1))
    if kind == 'lagr':
        m = p // 2
        out = _block_zero(p, range(m, p), range(m))
        for a in range(m):
            for b in range(m):
                out.append(_sum_functionals(p, _entry_functional(p, a, b), _entry_functional(p, m + b, m + a)))
        for a in range(m):
            for b in range(a + 1, m):
                out.append(_sum_functionals(p, _entry_functional(p, a, m + b), _entry_functional(p, b, m + a, -ONE)))
        return out
    raise UserInputError(f"no algebra for {g}")


@dataclass(frozen=True)
class LieAlgebraSpec:
    group: GroupId
    p: int
    basis: tuple
    annihilators: tuple

    @property
    def dim(self):
        return len(self.basis)

    def basis_span(self):
        return span([b.flatten() for b in self.basis], f"M_{self.p}", self.p * self.p)


@lru_cache(maxsize=None)
def algebra_of(g):
    p = g.p
    annihilators = tuple(RationalMatrix.from_rows(a, p) for a in _annihilators(g))
    if annihilators:
        system = RationalMatrix.from_rows([a.flatten() for a in annihilators], p * p)
        null = kernel(system, f"M_{p}")
        basis_rows = null.basis
    else:
        basis_rows = [[ONE if i == j else ZERO for j in range(p * p)] for i in range(p * p)]
    basis = tuple(RationalMatrix.from_flat(r, p) for r in basis_rows)
    return LieAlgebraSpec(g, p, basis, annihilators)


def expected_dim(g):
    """Dimension formula for 𝔤, independent of the kernel computation."""
    p = g.p
    kind = g.kind
    if kind == 'gl':
        return p * p
    if kind == 'sl':
        return p * p - 1
    if kind == 'so':
        return p * (p - 1) // 2
    if kind == 'sp':
        m = p // 2
        return m * (2 * m + 1)
    if kind == 'trivial':
        return 0
    if kind == 'lagr':
        m = p // 2
        return m * m + m * (m + 1) // 2
    if kind == 'affplus':
        p2 = g.dims[0]
        return p2 + p2 * p2
    p1, p2 = g.dims
    return {
        'dstar': p1 * p1 + p2 * p2,
        'tstar': p1 * p1 + p1 * p2 + p2 * p2,
        'istar': p2 * p2,
        'socaptstar': p1 * (p1 - 1) // 2 + p2 * (p2 - 1) // 2,
    }[kind]


def pair(a, x):
    """<A, X> = sum of entrywise products."""
    return sum((u * v for u, v in zip(a.flatten(), x.flatten())), ZERO)


def contains_matrix(spec, m):
    if m.shape != (spec.p, spec.p):
        raise DimensionMismatch(f"matrix of shape {m.shape} tested against 𝔤 ⊂ M_{spec.p}")
    return all(pair(a, m) == 0 for a in spec.annihilators)


def subalgebra_check(h, g):
    if h.p != g.p:
        raise DimensionMismatch(f"{h} acts on R^{h.p} but {g} acts on R^{g.p}")
    big = algebra_of(g)
    return all(contains_matrix(big, x) for x in algebra_of(h).basis)


def annihilator_rank(spec):
    if not spec.annihilators:
        return 0
    return rank(RationalMatrix.from_rows([a.flatten() for a in spec.annihilators], spec.p * spec.p))


def commutator_closed(spec):
    for i, x in enumerate(spec.basis):
        for y in spec.basis[i + 1:]:
            if not contains_matrix(spec, commutator(x, y)):
                return False
    return True


# --- rational group elements ---

PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29))


def _identity_rows(size):
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def _shear(size, rng):
    i, j = rng.sample(range(size), 2)
    rows = _identity_rows(size)
    rows[i][j] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2]))
    return RationalMatrix.from_rows(rows, size)


def _random_sl(size, rng, steps=4):
    m = RationalMatrix.identity(size)
    if size == 1:
        return m
    for _ in range(steps):
        m = matmul(m, _shear(size, rng))
    return m


def _random_gl(size, rng):
    rows = _identity_rows(size)
    rows[0][0] = Fraction(rng.choice([-2, -1, 2, 3]), rng.choice([1, 3]))
    scale = RationalMatrix.from_rows(rows, size)
    return matmul(_random_sl(size, rng), scale)


def _random_so(size, rng, steps=3):
    m = RationalMatrix.identity(size)
    if size == 1:
        return m
    for _ in range(steps):
        i, j = rng.sample(range(size), 2)
        a, b, c = rng.choice(PYTHAGOREAN)
        rows = _identity_rows(size)
        cos, sin = Fraction(a, c), Fraction(b, c) * rng.choice([-1, 1])
        rows[i][i], rows[j][j] = cos, cos
        rows[i][j], rows[j][i] = -sin, sin
        m = matmul(m, RationalMatrix.from_rows(rows, size))
    return m


def _random_symmetric(size, rng):
    rows = [[ZERO] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            v = Fraction(rng.randint(-2, 2), rng.choice([1, 2]))
            rows[i][j] = rows[j][i] = v
    return rows


def _blocks(top_left, top_right, bottom_right):
    p1, p2 = top_left.nrows, bottom_right.nrows
    rows = []
    for i in range(p1):
        rows.append(list(top_left.rows[i]) + list(top_right[i]))
    for i in range(p2):
        rows.append([ZERO] * p1 + list(bottom_right.rows[i]))
    return RationalMatrix.from_rows(rows, p1 + p2)


def sample_group_element(g, rng=None):
    """A rational matrix in G."""
    rng = rng or random.Random(0)
    p = g.p
    kind = g.kind
    if kind == 'gl':
        return _random_gl(p, rng)
    if kind == 'sl':
        return _random_sl(p, rng)
    if kind == 'so':
        return _random_so(p, rng)
    if kind == 'trivial':
        return RationalMatrix.identity(p)
    if kind == 'sp':
        m = p // 2
        result = RationalMatrix.identity(p)
        for _ in range(3):
            s = _random_symmetric(m, rng)
            upper = _blocks(RationalMatrix.identity(m), s, RationalMatrix.identity(m))
            result = matmul(result, upper if rng.random() < 0.5 else upper.transpose())
        return result
    if kind == 'lagr':
        m = p // 2
        c = _random_gl(m, rng)
        c_inv_t = inverse(c).transpose()
        d = RationalMatrix.from_rows(_random_symmetric(m, rng), m)
        return _blocks(c_inv_t, matmul(c_inv_t, d).rows, c)
    if kind == 'affplus':
        p2 = g.dims[0]
        b = [[Fraction(rng.randint(-2, 2)) for _ in range(p2)]]
        return _blocks(RationalMatrix.identity(1), b, _random_gl(p2, rng))
    p1, p2 = g.dims
    zero_block = [[ZERO] * p2 for _ in range(p1)]
    if kind == 'dstar':
        return _blocks(_random_gl(p1, rng), zero_block, _random_gl(p2, rng))
    if kind == 'tstar':
        top_right = [[Fraction(rng.randint(-2, 2)) for _ in range(p2)] for _ in range(p1)]
        return _blocks(_random_gl(p1, rng), top_right, _random_gl(p2, rng))
    if kind == 'istar':
        return _blocks(RationalMatrix.identity(p1), zero_block, _random_gl(p2, rng))
    if kind == 'socaptstar':
        return _blocks(_random_so(p1, rng), zero_block, _random_so(p2, rng))
    raise UserInputError(f"no sampler for {g}")


def _block_is_zero(m, rows_range, cols_range):
    return all(m[i, j] == 0 for i in rows_range for j in cols_range)


def is_group_element(g, a):
    """Exact membership test A ∈ G."""
    p = g.p
    if a.shape != (p, p):
        raise DimensionMismatch(f"matrix of shape {a.shape} tested against a group on R^{p}")
    ident = RationalMatrix.identity(p)
    d = det(a)
    kind = g.kind
    if kind == 'gl':
        return d != 0
    if kind == 'sl':
        return d == 1
    if kind == 'so':
        return matmul(a.transpose(), a) == ident and d == 1
    if kind == 'trivial':
        return a == ident
    if kind in ('sp', 'lagr'):
        jmat = symplectic_form(p)
        symplectic = matmul(matmul(a.transpose(), jmat), a) == jmat
        if kind == 'sp':
            return symplectic
        m = p // 2
        return symplectic and _block_is_zero(a, range(m, p), range(m))
    if kind == 'affplus':
        return d != 0 and a[0, 0] == 1 and _block_is_zero(a, range(1, p), range(1))
    p1 = g.dims[0]
    lower = _block_is_zero(a, range(p1, p), range(p1))
    upper = _block_is_zero(a, range(p1), range(p1, p))
    if kind == 'tstar':
        return d != 0 and lower
    if kind == 'dstar':
        return d != 0 and lower and upper
    if kind == 'istar':
        top_identity = all(a[i, j] == (1 if i == j else 0) for i in range(p1) for j in range(p1))
        return d != 0 and lower and upper and top_identity
    if kind == 'socaptstar':
        return matmul(a.transpose(), a) == ident and d == 1 and lower and upper
    return False
