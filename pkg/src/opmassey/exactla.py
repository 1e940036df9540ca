"""
Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are immutable row-major grids.  Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple


def Q(value) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {value!r} as an exact scalar")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Dense immutable rational matrix.  ``0 x n`` and ``n x 0`` are allowed."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(Q(a) for a in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("an empty matrix needs an explicit column count")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "Matrix":
        return Matrix([[self._data[i][j] for i in range(self.rows)]
                       for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = other.transpose()._data
            return Matrix([[_dot(r, c) for c in ot] for r in self._data], other.cols)
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(_dot(r, v) for r in self._data)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.cols == other.cols
                and self._data == other._data)

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(a) for a in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def _rref_rows(rows: list[list[Fraction]], ncols: int):
    """In-place Gauss-Jordan on the first ``ncols`` columns; returns pivots."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [a / lead for a in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...], Matrix]:
    """Reduced row echelon form ``R``, pivot columns and ``T`` with ``T @ M == R``."""
    m, n = M.rows, M.cols
    aug = [list(M.row(i)) + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    pivots = _rref_rows(aug, n)
    R = Matrix([row[:n] for row in aug], n)
    T = Matrix([row[n:] for row in aug], m)
    return R, tuple(pivots), T


def rank(M: Matrix) -> int:
    rows = [list(M.row(i)) for i in range(M.rows)]
    return len(_rref_rows(rows, M.cols))


def solve(M: Matrix, b: Sequence) -> Vector | None:
    """One solution of ``M x = b`` (free variables set to zero), or None."""
    b = tuple(Q(a) for a in b)
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.rows}")
    n = M.cols
    aug = [list(M.row(i)) + [b[i]] for i in range(M.rows)]
    pivots = _rref_rows(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]
    return tuple(x)


def kernel_basis(M: Matrix) -> list[Vector]:
    rows = [list(M.row(i)) for i in range(M.rows)]
    pivots = _rref_rows(rows, M.cols)
    pivset = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(tuple(v))
    return basis


def image_basis(M: Matrix) -> list[Vector]:
    """Columns of ``M`` at the pivot positions of its row echelon form."""
    rows = [list(M.row(i)) for i in range(M.rows)]
    return [M.column(c) for c in _rref_rows(rows, M.cols)]


def row_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical (rref) basis of the span of ``vectors``."""
    rows = [[Q(a) for a in v] for v in vectors]
    pivots = _rref_rows(rows, dim)
    return [tuple(rows[i]) for i in range(len(pivots))]


def membership(span: Sequence[Sequence], v: Sequence) -> Vector | None:
    """Coordinates ``c`` with ``sum(c_j span_j) == v``, or None if ``v`` is outside."""
    v = tuple(Q(a) for a in v)
    if not span:
        return () if not any(v) else None
    return solve(Matrix.from_columns(span, len(v)), v)


def quotient_data(sub: Sequence[Sequence], dim: int) -> tuple[list[Vector], Matrix]:
    """
    Complement of ``span(sub)`` by standard vectors, and the projection.

    The projection is a ``len(complement) x dim`` matrix sending a vector to
    its coordinates along the complement, with ``span(sub)`` as kernel.
    """
    sub = [tuple(Q(a) for a in v) for v in sub]
    if sub and rank(Matrix(sub, dim)) != len(sub):
        raise ValueError("subspace generators must be independent")
    echelon = row_basis(sub, dim)
    pivots = {next(j for j, a in enumerate(r) if a) for r in echelon}
    comp = [tuple(Fraction(int(i == j)) for i in range(dim))
            for j in range(dim) if j not in pivots]
    if not comp:
        return [], Matrix.zeros(0, dim)
    basis = Matrix.from_columns(sub + comp, dim)
    inv = inverse(basis)
    return comp, Matrix([inv.row(len(sub) + k) for k in range(len(comp))], dim)


def inverse(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise ValueError("only square matrices are invertible")
    R, pivots, T = rref(M)
    if len(pivots) != M.rows:
        raise ValueError("singular matrix")
    return T


def add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v) -> Vector:
    c = Q(c)
    return tuple(c * a for a in v)


def combination(coeffs: Sequence, vectors: Sequence[Sequence], dim: int) -> Vector:
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return tuple(out)
