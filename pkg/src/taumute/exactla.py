"""Exact linear algebra over the rationals and the integers.

Everything downstream (Hom spaces, kernels, presentations) reduces to the
handful of routines here, so they are written to exploit the sparsity of the
intertwining systems: eliminations work on rows stored as ``{column: value}``
dictionaries and never touch zero entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

SparseRow = dict[int, Fraction]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class Matrix:
    """Immutable dense matrix of :class:`~fractions.Fraction` entries.

    ``0 x m`` and ``m x 0`` matrices are legal and behave as zero maps.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entry grid does not match shape {rows}x{cols}")
            self._data = tuple(tuple(to_fraction(x) for x in r) for r in data)
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        return cls(rows, cols, [[columns[j][i] for j in range(cols)] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "Matrix":
        m = cls.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    # access -----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    # arithmetic ---------------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.cols
        other_rows = other._data
        out = []
        zero = Fraction(0)
        for r in self._data:
            acc = [zero] * ocols
            for k, x in enumerate(r):
                if x:
                    orow = other_rows[k]
                    for j in range(ocols):
                        y = orow[j]
                        if y:
                            acc[j] += x * y
            out.append(tuple(acc))
        return Matrix._raw(self.rows, ocols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix._raw(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix._raw(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self._data))

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else
                           tuple(() for _ in range(self.cols)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((x * y for x, y in zip(r, v) if x and y), Fraction(0)) for r in self._data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(len(rows), len(cols), tuple(
            tuple(self._data[i][j] for j in cols) for i in rows))

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self._data for x in r)

    def power(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def rank(self) -> int:
        return rref(self)[2]


def hstack(blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise ValueError("hstack row mismatch")
    data = tuple(tuple(x for b in blocks for x in b.row(i)) for i in range(r))
    return Matrix._raw(r, sum(b.cols for b in blocks), data)


def vstack(blocks: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, cols or 0)
    c = blocks[0].cols
    if any(b.cols != c for b in blocks):
        raise ValueError("vstack column mismatch")
    return Matrix._raw(sum(b.rows for b in blocks), c, tuple(r for b in blocks for r in b._data))


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            data[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return Matrix._raw(rows, cols, tuple(tuple(r) for r in data))


# sparse elimination ---------------------------------------------------------

def sparse_rref(rows: Iterable[SparseRow]) -> tuple[list[SparseRow], list[int]]:
    """Reduce sparse rows to RREF.

    Returns ``(reduced_rows, pivots)`` with ``reduced_rows[k]`` having a 1 in
    column ``pivots[k]``; pivots come out in increasing order.
    """
    basis: dict[int, SparseRow] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # reduce against existing pivots, smallest column first
        while r:
            hit = None
            for c in sorted(r):
                if c in basis:
                    hit = c
                    break
            if hit is None:
                break
            f = r[hit]
            for c, v in basis[hit].items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        # clear the new pivot column from the existing rows
        for q, b in basis.items():
            f = b.get(p)
            if f:
                for c, v in r.items():
                    nv = b.get(c, 0) - f * v
                    if nv:
                        b[c] = nv
                    else:
                        b.pop(c, None)
        basis[p] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def sparse_kernel(rows: Iterable[SparseRow], ncols: int) -> list[SparseRow]:
    """Basis of ``{x : row . x = 0 for all rows}`` as sparse vectors."""
    red, pivots = sparse_rref(rows)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for r, p in zip(red, pivots):
            x = r.get(f)
            if x:
                v[p] = -x
        out.append(v)
    return out


def sparse_rank(rows: Iterable[SparseRow]) -> int:
    return len(sparse_rref(rows)[1])


def dense_to_sparse(vec: Sequence) -> SparseRow:
    return {i: to_fraction(x) for i, x in enumerate(vec) if x}


def sparse_to_dense(vec: SparseRow, n: int) -> tuple[Fraction, ...]:
    return tuple(vec.get(i, Fraction(0)) for i in range(n))


def vectors_rank(vectors: Iterable[Sequence]) -> int:
    return sparse_rank(dense_to_sparse(v) for v in vectors)


# dense front ends ----------------------------------------------------------------

def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    red, pivots = sparse_rref(dense_to_sparse(r) for r in m.tolist())
    data = [sparse_to_dense(r, m.cols) for r in red]
    data += [tuple(Fraction(0) for _ in range(m.cols))] * (m.rows - len(red))
    return Matrix(m.rows, m.cols, data), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return sparse_rank(dense_to_sparse(r) for r in m.tolist())


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of the null space of ``m``."""
    ker = sparse_kernel((dense_to_sparse(r) for r in m.tolist()), m.cols)
    return Matrix.from_columns([sparse_to_dense(v, m.cols) for v in ker], m.cols)


def column_space_basis(m: Matrix) -> Matrix:
    """Columns spanning the image of ``m``, in RREF of the transpose."""
    red, _ = sparse_rref(dense_to_sparse(c) for c in m.columns())
    return Matrix.from_columns([sparse_to_dense(v, m.rows) for v in red], m.rows)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``a @ x == b``, or ``None`` when the system is inconsistent."""
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch: A is {a.shape}, b is {b.shape}")
    n = a.cols
    aug = [dense_to_sparse(tuple(a.row(i)) + tuple(b.row(i))) for i in range(a.rows)]
    red, pivots = sparse_rref(aug)
    if pivots and pivots[-1] >= n:
        return None
    x = [[Fraction(0)] * b.cols for _ in range(n)]
    for r, p in zip(red, pivots):
        for j in range(b.cols):
            x[p][j] = r.get(n + j, Fraction(0))
    return Matrix(n, b.cols, x)


def complement_basis(sub: Matrix, dim: int) -> list[int]:
    """Standard basis indices completing the column span of ``sub`` to ``k^dim``.

    The first standard vectors not already in the span are chosen, which fixes
    the splitting deterministically.
    """
    red, pivots = sparse_rref(dense_to_sparse(c) for c in sub.columns())
    pivset = set(pivots)
    return [i for i in range(dim) if i not in pivset]


def int_det_abs(m: Matrix) -> int:
    """Absolute value of the determinant of a square integer matrix (Bareiss)."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if not m.is_integral():
        raise ValueError("int_det_abs needs integral entries")
    n = m.rows
    if n == 0:
        return 1
    a = [[int(x) for x in m.row(i)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return abs(sign * a[n - 1][n - 1])


def bareiss_rank(m: Matrix) -> int:
    """Rank by fraction-free elimination; independent check on :func:`rref`."""
    den = 1
    for r in m.tolist():
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
    a = [[int(x * den) for x in r] for r in m.tolist()]
    rows, cols = m.rows, m.cols
    rk = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rk, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(rk + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * a[rk][c] - a[i][c] * a[rk][j]) // prev
            a[i][c] = 0
        prev = a[rk][c]
        rk += 1
    return rk


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def charpoly(m: Matrix) -> list[Fraction]:
    """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    n = m.rows
    if n != m.cols:
        raise ValueError("charpoly of a non-square matrix")
    coeffs = [Fraction(1)]
    mk = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(c))
        c = -sum((mk[i, i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
    return coeffs
