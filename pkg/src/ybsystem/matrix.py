"""Dense exact matrices and the tensor-leg machinery on V (x) V (x) V.

Composite indices are row-major: the basis vector e_i (x) e_j of V (x) V sits
at position ``i*d + j``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arith import QQ, Field, field_inverse, field_of, format_scalar, parse_scalar

LEGS = ((1, 2), (1, 3), (2, 3))


class SingularMatrixError(ZeroDivisionError):
    pass


class Matrix:
    """Immutable rows x cols matrix over one exact field."""

    __slots__ = ("rows", "cols", "field", "_e")

    def __init__(self, rows: int, cols: int, entries: Iterable, field: Field = QQ):
        entries = tuple(field(x) for x in entries)
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.field = field
        self._e = entries

    @classmethod
    def _raw(cls, rows, cols, entries, field):
        m = cls.__new__(cls)
        m.rows, m.cols, m.field, m._e = rows, cols, field, tuple(entries)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged or empty row list")
        if field is None:
            field = _guess_field(x for r in rows for x in r)
        return cls(len(rows), len(rows[0]), [x for r in rows for x in r], field)

    @classmethod
    def parse(cls, grid: Sequence[Sequence[str]], field: Field = QQ, bindings=None) -> "Matrix":
        return cls.from_rows([[parse_scalar(s, field, bindings) for s in row] for row in grid], field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        zero, one = field.zero, field.one
        return cls._raw(n, n, [one if i == j else zero for i in range(n) for j in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "Matrix":
        return cls._raw(rows, cols, [field.zero] * (rows * cols), field)

    @classmethod
    def diag(cls, values: Sequence, field: Field | None = None) -> "Matrix":
        n = len(values)
        if field is None:
            field = _guess_field(values)
        z = field.zero
        return cls(n, n, [values[i] if i == j else z for i in range(n) for j in range(n)], field)

    @classmethod
    def antidiag(cls, values: Sequence, field: Field | None = None) -> "Matrix":
        """values[i] placed at (i, n-1-i)."""
        n = len(values)
        if field is None:
            field = _guess_field(values)
        z = field.zero
        return cls(n, n, [values[i] if j == n - 1 - i else z for i in range(n) for j in range(n)], field)

    # -- access ---------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i * self.cols + j]

    def entries(self) -> tuple:
        return self._e

    def to_rows(self) -> list[list]:
        c = self.cols
        return [list(self._e[i * c:(i + 1) * c]) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self._e)

    def first_nonzero(self):
        """(i, j, value) of the first nonzero entry in row-major order, or None."""
        for k, x in enumerate(self._e):
            if x:
                return divmod(k, self.cols) + (x,)
        return None

    def map(self, fn, field: Field | None = None) -> "Matrix":
        return Matrix(self.rows, self.cols, [fn(x) for x in self._e], field or self.field)

    def to_field(self, field: Field) -> "Matrix":
        return Matrix(self.rows, self.cols, self._e, field)

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw(self.rows, self.cols, [a + b for a, b in zip(self._e, other._e)], self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix._raw(self.rows, self.cols, [a - b for a, b in zip(self._e, other._e)], self.field)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.rows, self.cols, [-a for a in self._e], self.field)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.rows, self.cols, [c * a for a in self._e], self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        zero = self.field.zero
        brows = [[(j, x) for j, x in enumerate(other._e[k * p:(k + 1) * p]) if x] for k in range(m)]
        out = []
        for i in range(n):
            acc = [None] * p
            for k, a in enumerate(self._e[i * m:(i + 1) * m]):
                if not a:
                    continue
                for j, b in brows[k]:
                    v = a * b
                    acc[j] = v if acc[j] is None else acc[j] + v
            out.extend(zero if x is None else x for x in acc)
        return Matrix._raw(n, p, out, self.field)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._e, other._e))

    __hash__ = None

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)], self.field)

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        t = self.field.zero
        for i in range(self.rows):
            t = t + self[i, i]
        return t

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in row] for row in self.to_rows()]

    def __repr__(self):
        return f"Matrix({self.to_strings()}, {self.field})"

    def __str__(self):
        cells = self.to_strings()
        w = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(w) for c in row) + "]" for row in cells)


def _guess_field(values) -> Field:
    for x in values:
        if not isinstance(x, (int,)) or isinstance(x, bool):
            return field_of(x)
    return QQ


# ---------------------------------------------------------------------------
# tensor products and legs

def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product, (A (x) B)[i*rB+k, j*cB+l] = A[i,j] B[k,l]."""
    A._check(B)
    rb, cb = B.rows, B.cols
    rows, cols = A.rows * rb, A.cols * cb
    zero = A.field.zero
    out = [zero] * (rows * cols)
    for i in range(A.rows):
        for j in range(A.cols):
            a = A[i, j]
            if not a:
                continue
            for k in range(rb):
                base = (i * rb + k) * cols + j * cb
                for l in range(cb):
                    b = B[k, l]
                    if b:
                        out[base + l] = a * b
    return Matrix._raw(rows, cols, out, A.field)


def permutation_P(d: int, field: Field = QQ) -> Matrix:
    """The flip P(e_i (x) e_j) = e_j (x) e_i on V (x) V, dim V = d."""
    if d < 1:
        raise ValueError("d must be positive")
    n = d * d
    zero, one = field.zero, field.one
    out = [zero] * (n * n)
    for i in range(d):
        for j in range(d):
            out[(j * d + i) * n + (i * d + j)] = one
    return Matrix._raw(n, n, out, field)


def embed(M: Matrix, legs: tuple, d: int) -> Matrix:
    """Operator M on V (x) V acting on the given pair of factors of V^(x)3."""
    if M.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} matrix, got {M.shape}")
    legs = tuple(legs)
    I = Matrix.identity(d, M.field)
    if legs == (1, 2):
        return kron(M, I)
    if legs == (2, 3):
        return kron(I, M)
    if legs == (1, 3):
        P23 = kron(I, permutation_P(d, M.field))
        return P23 @ kron(M, I) @ P23
    raise ValueError(f"legs must be one of {LEGS}, got {legs}")


def partial_transpose_t1(R: Matrix, d: int) -> Matrix:
    """Transpose in the first tensor factor: R^t1[(i,k),(j,l)] = R[(j,k),(i,l)]."""
    if R.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} matrix, got {R.shape}")
    n = d * d
    out = [None] * (n * n)
    for i in range(d):
        for k in range(d):
            for j in range(d):
                for l in range(d):
                    out[(i * d + k) * n + (j * d + l)] = R[j * d + k, i * d + l]
    return Matrix._raw(n, n, out, R.field)


# ---------------------------------------------------------------------------
# elimination

def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot rule: for each column left to right, the first remaining row with a
    nonzero entry.
    """
    rows = [list(A._e[i * A.cols:(i + 1) * A.cols]) for i in range(A.rows)]
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field_inverse(rows[r][c])
        rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = rows[:r]
    zero = A.field.zero
    out = [x for row in rows for x in row] + [zero] * ((A.rows - r) * A.cols)
    return Matrix._raw(A.rows, A.cols, out, A.field), pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def determinant(A: Matrix):
    """Exact determinant by Gaussian elimination (first nonzero pivot)."""
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    rows = A.to_rows()
    det = A.field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return A.field.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination on [A | I]."""
    if not A.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    aug = hstack(A, Matrix.identity(n, A.field))
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix._raw(n, n, [red[i, n + j] for i in range(n) for j in range(n)], A.field)


def hstack(A: Matrix, B: Matrix) -> Matrix:
    """[A | B]."""
    if A.rows != B.rows:
        raise ValueError("row count mismatch")
    out = []
    for ra, rb in zip(A.to_rows(), B.to_rows()):
        out.extend(ra)
        out.extend(rb)
    return Matrix._raw(A.rows, A.cols + B.cols, out, A.field)


def is_invertible(A: Matrix) -> bool:
    return bool(determinant(A))
