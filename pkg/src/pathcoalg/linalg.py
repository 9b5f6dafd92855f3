"""Dense exact linear algebra over the scalar fields.

Vectors are lists of scalars, matrices are lists of row vectors.  Everything
is computed by reduced row echelon form with a deterministic pivot choice
(first usable row, columns scanned left to right), so kernel bases and span
bases are reproducible across runs.
"""
from __future__ import annotations


class DimensionMismatch(ValueError):
    pass


def _check_rect(rows: list[list]) -> int:
    if not rows:
        return 0
    n = len(rows[0])
    for r in rows:
        if len(r) != n:
            raise DimensionMismatch(f"ragged matrix: row of length {len(r)} vs {n}")
    return n


def rref(field, rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.

    Returns (R, pivots) where R has the same row count as the input, all
    nonzero rows first, and pivots lists the pivot column of each nonzero row.
    """
    n = _check_rect(rows)
    R = [list(r) for r in rows]
    pivots: list[int] = []
    lead = 0
    for col in range(n):
        pivot_row = None
        for i in range(lead, len(R)):
            if not field.is_zero(R[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        R[lead], R[pivot_row] = R[pivot_row], R[lead]
        inv = field.inv(R[lead][col])
        if inv != field.one:
            R[lead] = [field.mul(inv, x) for x in R[lead]]
        prow = R[lead]
        for i in range(len(R)):
            if i == lead:
                continue
            f = R[i][col]
            if field.is_zero(f):
                continue
            R[i] = [field.sub(x, field.mul(f, p)) for x, p in zip(R[i], prow)]
        pivots.append(col)
        lead += 1
        if lead == len(R):
            break
    return R, pivots


def rref_with_transform(field, rows: list[list]) -> tuple[list[list], list[list], list[int]]:
    """Like rref but also returns T with T @ rows == R (T square, invertible)."""
    n = _check_rect(rows)
    k = len(rows)
    aug = [list(r) + [field.one if j == i else field.zero for j in range(k)]
           for i, r in enumerate(rows)]
    # eliminate on the first n columns only
    pivots: list[int] = []
    lead = 0
    for col in range(n):
        pivot_row = None
        for i in range(lead, k):
            if not field.is_zero(aug[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        aug[lead], aug[pivot_row] = aug[pivot_row], aug[lead]
        inv = field.inv(aug[lead][col])
        if inv != field.one:
            aug[lead] = [field.mul(inv, x) for x in aug[lead]]
        prow = aug[lead]
        for i in range(k):
            if i == lead:
                continue
            f = aug[i][col]
            if field.is_zero(f):
                continue
            aug[i] = [field.sub(x, field.mul(f, p)) for x, p in zip(aug[i], prow)]
        pivots.append(col)
        lead += 1
        if lead == k:
            break
    R = [row[:n] for row in aug]
    T = [row[n:] for row in aug]
    return R, T, pivots


def rank(field, rows: list[list]) -> int:
    _, pivots = rref(field, rows)
    return len(pivots)


def nullspace(field, rows: list[list], ncols: int | None = None) -> list[list]:
    """Basis of {v : rows @ v = 0}, in reduced echelon form.

    One basis vector per free column, emitted in increasing column order;
    the free coordinate itself is set to 1.  ncols pins the ambient
    dimension when rows may be empty.
    """
    n = _check_rect(rows)
    if ncols is not None:
        if rows and n != ncols:
            raise DimensionMismatch(f"rows have {n} columns, expected {ncols}")
        n = ncols
        if not rows:
            return [[field.one if j == i else field.zero for j in range(n)]
                    for i in range(n)]
    if n == 0:
        return []
    R, pivots = rref(field, rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [field.zero] * n
        v[free] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(R[i][free])
        basis.append(v)
    return basis


def row_reduce_basis(field, rows: list[list]) -> list[list]:
    """Canonical basis (nonzero RREF rows) of the row span."""
    R, pivots = rref(field, rows)
    return [R[i] for i in range(len(pivots))]


def subspace_equal(field, a: list[list], b: list[list]) -> bool:
    """True iff the row spans coincide; raises on ambient dimension mismatch."""
    if a and b and len(a[0]) != len(b[0]):
        raise DimensionMismatch(
            f"ambient dimensions differ: {len(a[0])} vs {len(b[0])}")
    ra = rank(field, a)
    rb = rank(field, b)
    if ra != rb:
        return False
    return rank(field, list(a) + list(b)) == ra


def scale_vector(field, c, v: list) -> list:
    return [field.mul(c, x) for x in v]


def add_vectors(field, u: list, v: list) -> list:
    return [field.add(x, y) for x, y in zip(u, v)]


def is_zero_vector(field, v: list) -> bool:
    return all(field.is_zero(x) for x in v)


class LinearSolver:
    """Row reduction of a fixed generating set, precomputed for repeated
    membership tests and coordinate solves against the original rows."""

    def __init__(self, field, rows: list[list]):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.ncols = _check_rect(self.rows)
        self.R, self.T, self.pivots = rref_with_transform(field, self.rows)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: list) -> tuple[list, list]:
        """Eliminate v against the reduced rows.

        Returns (residual, coeffs) with v == residual + coeffs @ R_nonzero.
        """
        field = self.field
        if len(v) != self.ncols and self.ncols:
            raise DimensionMismatch(f"vector length {len(v)} vs {self.ncols}")
        residual = list(v)
        coeffs = []
        for i, pc in enumerate(self.pivots):
            c = residual[pc]
            coeffs.append(c)
            if field.is_zero(c):
                continue
            prow = self.R[i]
            residual = [field.sub(x, field.mul(c, p)) for x, p in zip(residual, prow)]
        return residual, coeffs

    def contains(self, v: list) -> bool:
        residual, _ = self.reduce(v)
        return is_zero_vector(self.field, residual)

    def coordinates(self, v: list) -> list | None:
        """Coefficients over the original rows, or None if v is outside the span."""
        field = self.field
        residual, coeffs = self.reduce(v)
        if not is_zero_vector(field, residual):
            return None
        out = [field.zero] * len(self.rows)
        for i, c in enumerate(coeffs):
            if field.is_zero(c):
                continue
            trow = self.T[i]
            out = [field.add(x, field.mul(c, t)) for x, t in zip(out, trow)]
        return out
