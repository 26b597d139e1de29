"""
Exact linear algebra over the rationals.

Subspaces are stored as reduced row-echelon bases tagged with the label of the
coordinate system they live in; sums, intersections and kernels are computed by
elimination on Fraction rows, so every dimension reported upstream is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from errors import DimensionMismatch

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in r) for r in self.rows)
        for r in rows:
            if len(r) != self.ncols:
                raise DimensionMismatch(f"ragged matrix: row of length {len(r)}, expected {self.ncols}")
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(rows), ncols)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, size):
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(size)) for i in range(size)), size)

    @classmethod
    def unit(cls, size, i, j):
        rows = [[ZERO] * size for _ in range(size)]
        rows[i][j] = ONE
        return cls(tuple(tuple(r) for r in rows), size)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def flatten(self):
        return [v for r in self.rows for v in r]

    @classmethod
    def from_flat(cls, values, size):
        values = list(values)
        return cls(tuple(tuple(values[i * size:(i + 1) * size]) for i in range(size)), size)

    def transpose(self):
        return RationalMatrix(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch("matrix shapes differ")
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return RationalMatrix(tuple(tuple(c * v for v in r) for r in self.rows), self.ncols)

    def __matmul__(self, other):
        return matmul(self, other)

    def is_zero(self):
        return not any(v for r in self.rows for v in r)


def matmul(a, b):
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    cols = list(zip(*b.rows)) if b.rows else [()] * b.ncols
    return RationalMatrix(tuple(tuple(sum((x * y for x, y in zip(r, c)), ZERO) for c in cols) for r in a.rows), b.ncols)


def commutator(a, b):
    return matmul(a, b) - matmul(b, a)


def _echelon(rows, ncols):
    """Reduced row-echelon form of Fraction rows; returns (rows, pivot columns)."""
    work = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        pivot = next((i for i in range(r, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead = work[r][c]
        if lead != 1:
            work[r] = [v / lead for v in work[r]]
        prow = work[r]
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(work)):
            if i == r:
                continue
            factor = work[i][c]
            if factor:
                row = work[i]
                for j in support:
                    row[j] -= factor * prow[j]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rref(m):
    """(reduced row-echelon form, rank). Zero rows are kept at the bottom."""
    rows, pivots = _echelon(m.rows, m.ncols)
    rank = len(rows)
    padded = [tuple(r) for r in rows] + [(ZERO,) * m.ncols] * (m.nrows - rank)
    return RationalMatrix(tuple(padded), m.ncols), rank


def rank(m):
    return len(_echelon(m.rows, m.ncols)[0])


def det(m):
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    work = [list(r) for r in m.rows]
    size = m.nrows
    result = ONE
    for c in range(size):
        pivot = next((i for i in range(c, size) if work[i][c]), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            result = -result
        lead = work[c][c]
        result *= lead
        for i in range(c + 1, size):
            factor = work[i][c] / lead
            if factor:
                work[i] = [a - factor * b for a, b in zip(work[i], work[c])]
    return result


def inverse(m):
    size = m.nrows
    augmented = [list(r) + [ONE if i == j else ZERO for j in range(size)] for i, r in enumerate(m.rows)]
    rows, pivots = _echelon(augmented, 2 * size)
    if len(rows) < size or pivots[size - 1] != size - 1:
        raise DimensionMismatch("matrix is singular")
    return RationalMatrix(tuple(tuple(r[size:]) for r in rows), size)


@dataclass(frozen=True)
class SubspaceBasis:
    ambient_dim: int
    ambient_label: str
    basis: tuple = ()
    pivots: tuple = ()

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vector):
        if len(vector) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(vector)} in ambient {self.ambient_dim}")
        residual = [Fraction(v) for v in vector]
        for row, p in zip(self.basis, self.pivots):
            factor = residual[p]
            if factor:
                residual = [a - factor * b for a, b in zip(residual, row)]
        return not any(residual)

    def vectors(self):
        return [list(r) for r in self.basis]


def span(vectors, ambient_label, ambient_dim):
    """Echelonized span of `vectors` inside the labelled ambient."""
    vectors = [[Fraction(v) for v in vec] for vec in vectors]
    for vec in vectors:
        if len(vec) != ambient_dim:
            raise DimensionMismatch(f"vector of length {len(vec)} in ambient {ambient_label} of dim {ambient_dim}")
    rows, pivots = _echelon(vectors, ambient_dim)
    return SubspaceBasis(ambient_dim, ambient_label, tuple(tuple(r) for r in rows), tuple(pivots))


def zero_subspace(ambient_label, ambient_dim):
    return SubspaceBasis(ambient_dim, ambient_label)


def full_space(ambient_label, ambient_dim):
    rows = [[ONE if i == j else ZERO for j in range(ambient_dim)] for i in range(ambient_dim)]
    return span(rows, ambient_label, ambient_dim)


def _check_same_ambient(a, b):
    if a.ambient_label != b.ambient_label or a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"subspaces live in different ambients: {a.ambient_label} vs {b.ambient_label}")


def subspace_sum(a, b):
    _check_same_ambient(a, b)
    return span(list(a.basis) + list(b.basis), a.ambient_label, a.ambient_dim)


def subspace_intersection(a, b):
    """Zassenhaus: echelonize [u|u] over u∈a and [v|0] over v∈b; rows whose left half
    vanishes carry a basis of a∩b in their right half."""
    _check_same_ambient(a, b)
    size = a.ambient_dim
    if not a.basis or not b.basis:
        return zero_subspace(a.ambient_label, size)
    stacked = [list(u) + list(u) for u in a.basis] + [list(v) + [ZERO] * size for v in b.basis]
    rows, _ = _echelon(stacked, 2 * size)
    meet = [r[size:] for r in rows if not any(r[:size])]
    return span(meet, a.ambient_label, size)


def kernel(m, ambient_label=None):
    """Null space {v : m v = 0} as a subspace of the column space."""
    label = ambient_label or f"Q^{m.ncols}"
    rows, pivots = _echelon(m.rows, m.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * m.ncols
        v[free] = ONE
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return span(basis, label, m.ncols)


def is_subspace(a, b):
    """True iff a ⊆ b."""
    _check_same_ambient(a, b)
    return all(b.contains(v) for v in a.basis)


def quotient_dim(sub, ambient_dim):
    if sub.ambient_dim != ambient_dim:
        raise DimensionMismatch(f"subspace of {sub.ambient_label} is not in an ambient of dim {ambient_dim}")
    return ambient_dim - sub.dim


def relative_dim(larger, smaller):
    """dim(larger/smaller) for smaller ⊆ larger."""
    _check_same_ambient(larger, smaller)
    return larger.dim - smaller.dim


def complement_pivots(sub):
    """Coordinates not used as pivots; their unit vectors span a complement of sub."""
    used = set(sub.pivots)
    return [j for j in range(sub.ambient_dim) if j not in used]
