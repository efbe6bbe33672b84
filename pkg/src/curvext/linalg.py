"""Exact dense linear algebra over the coefficient fields.

Rank, determinant, solving and kernel bases.  Over Q the forward pass is
fraction-free (Bareiss recurrence on integer-scaled rows) to keep entries
at determinant size; over finite fields it is ordinary elimination.
Pivoting is deterministic: the first row with a nonzero entry, scanning
columns left to right, so results are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .fields import FieldDescriptor, FieldElement, Rationals


class Matrix:
    """Immutable row-major matrix of payloads over one descriptor."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: FieldDescriptor, rows, ncols: int | None = None):
        data = []
        width = ncols
        for row in rows:
            r = []
            for v in row:
                if isinstance(v, FieldElement):
                    if v.field != field:
                        raise InputError("matrix entry from a different field")
                    r.append(v.payload)
                else:
                    r.append(field.coerce(v))
            if width is None:
                width = len(r)
            elif len(r) != width:
                raise InputError("ragged matrix rows")
            data.append(tuple(r))
        self.field = field
        self.rows = tuple(data)
        self.nrows = len(data)
        self.ncols = width if width is not None else 0

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, [[field.pzero] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.pone if i == j else field.pzero
                            for j in range(n)] for i in range(n)])

    def entry(self, i, j) -> FieldElement:
        return FieldElement(self.field, self.rows[i][j])

    def elements(self):
        """Row-major FieldElement view."""
        for row in self.rows:
            for v in row:
                yield FieldElement(self.field, v)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field == self.field
                and other.rows == self.rows and other.ncols == self.ncols)

    def __hash__(self):
        return hash((self.field, self.rows, self.ncols))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"


def _scale_rows_to_int(rows):
    """Clear denominators row by row; preserves rank and kernel."""
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = den * v.denominator // _igcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bareiss_forward(rows):
    """In-place fraction-free elimination on integer rows.

    Returns (pivots, sign) where pivots is a list of (row, col) in order.
    """
    n = len(rows)
    m = len(rows[0]) if n else 0
    pivots = []
    sign = 1
    prev = 1
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, n):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, n):
            fi = rows[i]
            fr = rows[r]
            t = fi[c]
            for j in range(c, m):
                fi[j] = (fi[j] * piv - t * fr[j]) // prev
        prev = piv
        pivots.append((r, c))
        r += 1
        if r == n:
            break
    return pivots, sign


def _field_forward(field, rows):
    """Ordinary elimination over a finite field; returns pivots list."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, n):
            if not field.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(v, inv) for v in rows[r]]
        for i in range(n):
            if i != r and not field.is_zero(rows[i][c]):
                t = rows[i][c]
                rows[i] = [field.sub(a, field.mul(t, b))
                           for a, b in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == n:
            break
    return pivots


def _echelon(mat: Matrix):
    """Reduced row echelon form with exact arithmetic.

    Over Q the forward pass is Bareiss on integer-scaled rows, then the
    echelon rows are normalized back to Fractions.
    """
    F = mat.field
    if isinstance(F, Rationals):
        rows = _scale_rows_to_int([list(r) for r in mat.rows])
        pivots, _ = _bareiss_forward(rows)
        frows = [[Fraction(v) for v in row] for row in rows]
        # back-substitute to reduced form
        for r, c in reversed(pivots):
            piv = frows[r][c]
            frows[r] = [v / piv for v in frows[r]]
            for i in range(r):
                t = frows[i][c]
                if t:
                    frows[i] = [a - t * b for a, b in zip(frows[i], frows[r])]
        return frows, pivots
    rows = [list(r) for r in mat.rows]
    pivots = _field_forward(F, rows)
    return rows, pivots


def rank(mat: Matrix) -> int:
    if mat.nrows == 0 or mat.ncols == 0:
        return 0
    F = mat.field
    if isinstance(F, Rationals):
        rows = _scale_rows_to_int([list(r) for r in mat.rows])
        pivots, _ = _bareiss_forward(rows)
        return len(pivots)
    rows = [list(r) for r in mat.rows]
    return len(_field_forward(F, rows))


def det(mat: Matrix) -> FieldElement:
    """Determinant of a square matrix; det of the empty 0x0 matrix is 1."""
    if mat.nrows != mat.ncols:
        raise InputError("determinant of a non-square matrix")
    F = mat.field
    n = mat.nrows
    if n == 0:
        return F.one()
    if isinstance(F, Rationals):
        scaled = []
        scale = Fraction(1)
        for row in mat.rows:
            den = 1
            for v in row:
                den = den * v.denominator // _igcd(den, v.denominator)
            scale *= den
            scaled.append([int(v * den) for v in row])
        pivots, sign = _bareiss_forward(scaled)
        if len(pivots) < n:
            return F.zero()
        r, c = pivots[-1]
        return FieldElement(F, Fraction(sign * scaled[r][c]) / scale)
    rows = [list(r) for r in mat.rows]
    sign_flip = False
    acc = F.pone
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, n):
            if not F.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            return F.zero()
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            sign_flip = not sign_flip
        piv = rows[r][c]
        acc = F.mul(acc, piv)
        inv = F.inv(piv)
        for i in range(r + 1, n):
            if not F.is_zero(rows[i][c]):
                t = F.mul(rows[i][c], inv)
                rows[i] = [F.sub(a, F.mul(t, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
    if sign_flip:
        acc = F.neg(acc)
    return FieldElement(F, acc)


def solve(mat: Matrix, rhs):
    """One exact solution of mat * x = rhs, or None if inconsistent.

    Free variables are set to zero, which makes the returned solution
    deterministic.  ``rhs`` is a sequence of length nrows.
    """
    F = mat.field
    b = [v.payload if isinstance(v, FieldElement) else F.coerce(v) for v in rhs]
    if len(b) != mat.nrows:
        raise InputError("right-hand side length mismatch")
    aug = Matrix(F, [list(row) + [bv] for row, bv in zip(mat.rows, b)]
                 if mat.nrows else [])
    if mat.nrows == 0:
        return [F.zero()] * mat.ncols
    rows, pivots = _echelon(aug)
    n_cols = mat.ncols
    for r, c in pivots:
        if c == n_cols:
            return None
    x = [F.pzero] * n_cols
    for r, c in pivots:
        # reduced form: row r is e_c plus free-column entries
        acc = rows[r][n_cols]
        for j in range(c + 1, n_cols):
            if not F.is_zero(rows[r][j]) and not F.is_zero(x[j]):
                acc = F.sub(acc, F.mul(rows[r][j], x[j]))
        x[c] = acc
    # rows below the pivots must be consistent (all-zero rows with zero rhs)
    for i in range(len(pivots), mat.nrows):
        if not F.is_zero(rows[i][n_cols]):
            return None
    return [FieldElement(F, v) for v in x]


def kernel_basis(mat: Matrix):
    """Basis of the right kernel, one vector per free column, in column order.

    The vector for free column j has coordinate 1 at j and zeros at the
    other free columns; this is the reduced-echelon kernel basis and is
    deterministic.
    """
    F = mat.field
    if mat.ncols == 0:
        return []
    if mat.nrows == 0:
        basis = []
        for j in range(mat.ncols):
            v = [F.pzero] * mat.ncols
            v[j] = F.pone
            basis.append([FieldElement(F, x) for x in v])
        return basis
    rows, pivots = _echelon(mat)
    pivot_cols = {c for _, c in pivots}
    basis = []
    for j in range(mat.ncols):
        if j in pivot_cols:
            continue
        v = [F.pzero] * mat.ncols
        v[j] = F.pone
        for r, c in pivots:
            v[c] = F.neg(rows[r][j])
        basis.append([FieldElement(F, x) for x in v])
    return basis


def rref(mat: Matrix) -> Matrix:
    """Reduced row echelon form with zero rows dropped.

    Unit pivots, zeros above and below each pivot, pivot columns strictly
    increasing down the rows; deterministic for a given input.
    """
    if mat.nrows == 0:
        return Matrix(mat.field, [], ncols=mat.ncols)
    rows, pivots = _echelon(mat)
    return Matrix(mat.field, [rows[r] for r, _ in pivots], ncols=mat.ncols)


def from_columns(field, columns) -> Matrix:
    cols = [list(c) for c in columns]
    if not cols:
        return Matrix(field, [])
    return Matrix(field, [[col[i] for col in cols] for i in range(len(cols[0]))])
