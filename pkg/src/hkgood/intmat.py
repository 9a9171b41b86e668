"""Dense integer matrices with exact (arbitrary precision) entries.

Everything here works on Python ints, so there is no overflow anywhere.
The Smith normal form is the workhorse for the rest of the package:
kernels, cokernels, integer linear systems and group canonical forms are
all read off from it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable ``rows x cols`` integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        for row in data:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: row of length {len(row)}, expected {cols}")
        self.rows = rows
        self.cols = cols
        self.data = data

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        for c in columns:
            if len(c) != rows:
                raise ValueError(f"column of length {len(c)}, expected {rows}")
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls(out, rows, cols)

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"], rows: int | None = None) -> "IntMatrix":
        if rows is None:
            if not blocks:
                raise ValueError("hstack of nothing needs an explicit row count")
            rows = blocks[0].rows
        for b in blocks:
            if b.rows != rows:
                raise ValueError("hstack row mismatch")
        data = [sum((b.data[i] for b in blocks), ()) for i in range(rows)]
        return cls(data, rows, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence["IntMatrix"], cols: int | None = None) -> "IntMatrix":
        if cols is None:
            if not blocks:
                raise ValueError("vstack of nothing needs an explicit column count")
            cols = blocks[0].cols
        for b in blocks:
            if b.cols != cols:
                raise ValueError("vstack column mismatch")
        data = [row for b in blocks for row in b.data]
        return cls(data, len(data), cols)

    @classmethod
    def block_diag(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                out[r0 + i][c0:c0 + b.cols] = b.data[i]
            r0 += b.rows
            c0 += b.cols
        return cls(out, rows, cols)

    # access ------------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def row(self, i: int) -> list[int]:
        return list(self.data[i])

    def submatrix(self, rows: Sequence[int] | range, cols: Sequence[int] | range) -> "IntMatrix":
        rows = list(rows)
        cols = list(cols)
        return IntMatrix([[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    # arithmetic --------------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        data = [[sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self.data]
        return IntMatrix(data, self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                         self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self.data], self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.data)] if self.rows else
                         [[] for _ in range(self.cols)], self.cols, self.rows)

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == IntMatrix.identity(self.rows)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


def as_matrix(m, rows: int | None = None, cols: int | None = None) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    m = [list(r) for r in m]
    if rows is not None and not m:
        return IntMatrix.zeros(rows, cols or 0)
    return IntMatrix(m, rows, cols)


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


def _snf(m: IntMatrix):
    """Return (u, d, v, u_inv) as mutable lists with u.m.v = d."""
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, k):
        if i != k:
            a[i], a[k] = a[k], a[i]
            u[i], u[k] = u[k], u[i]
            for r in ui:
                r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        if j != k:
            for r in a:
                r[j], r[k] = r[k], r[j]
            for r in v:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ad, as_ = a[dst], a[src]
        for j in range(cols):
            if as_[j]:
                ad[j] += q * as_[j]
        ud, us = u[dst], u[src]
        for j in range(rows):
            if us[j]:
                ud[j] += q * us[j]
        for r in ui:
            if r[dst]:
                r[src] -= q * r[dst]

    def add_col(dst, src, q):
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        for r in v:
            if r[src]:
                r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            row = a[i]
            for j in range(t, cols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                # a remainder smaller than the pivot survived: make it the pivot
                best = (abs(p), t, t)
                for i in range(t + 1, rows):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
            for r in ui:
                r[t] = -r[t]
        t += 1
    return u, a, v, ui


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``u @ m @ v == d``.

    ``u`` and ``v`` are unimodular; ``d`` is diagonal, non-negative, and each
    diagonal entry divides the next.  Pivots are chosen of minimal absolute
    value to keep coefficients small.  Only ``d`` is unique.
    """
    m = as_matrix(m)
    u, d, v, _ = _snf(m)
    return (IntMatrix(u, m.rows, m.rows), IntMatrix(d, m.rows, m.cols),
            IntMatrix(v, m.cols, m.cols))


def smith_with_inverse(m: IntMatrix):
    """Like :func:`smith_normal_form` but also return ``u`` inverse."""
    u, d, v, ui = _snf(m)
    return (IntMatrix(u, m.rows, m.rows), IntMatrix(d, m.rows, m.cols),
            IntMatrix(v, m.cols, m.cols), IntMatrix(ui, m.rows, m.rows))


def diagonal_of(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def rank(m: IntMatrix) -> int:
    _, d, _ = smith_normal_form(m)
    return sum(1 for x in diagonal_of(d) if x)


def solve_integer(a: IntMatrix, y: Sequence[int]) -> list[int] | None:
    """Some integer ``x`` with ``a @ x == y``, or None when none exists."""
    if len(y) != a.rows:
        raise ValueError("right hand side has the wrong length")
    u, d, v = smith_normal_form(a)
    w = u.apply(list(y))
    diag = diagonal_of(d)
    z = [0] * a.cols
    for i, wi in enumerate(w):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if wi:
                return None
        else:
            if wi % di:
                return None
            z[i] = wi // di
    return v.apply(z)


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel lattice of ``a``."""
    _, d, v = smith_normal_form(a)
    r = sum(1 for x in diagonal_of(d) if x)
    return v.submatrix(range(a.cols), range(r, a.cols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (full column rank) of the lattice spanned by the columns of ``gens``."""
    u, d, _, ui = smith_with_inverse(gens)
    diag = diagonal_of(d)
    r = sum(1 for x in diag if x)
    # gens = ui d v^-1, so the columns of ui scaled by d span the same lattice
    cols = [[ui[i, j] * diag[j] for i in range(gens.rows)] for j in range(r)]
    return IntMatrix.from_columns(cols, gens.rows)


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], nvars: int):
    """Integer solution set of a rational linear system.

    Returns ``(particular, kernel)`` with ``kernel`` an IntMatrix whose columns
    span the homogeneous integer solutions, or None when no integer solution
    exists.
    """
    int_rows = []
    int_rhs = []
    for row, b in zip(rows, rhs):
        den = 1
        for x in list(row) + [b]:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        int_rows.append([int(Fraction(x) * den) for x in row])
        int_rhs.append(int(Fraction(b) * den))
    a = IntMatrix(int_rows, len(int_rows), nvars) if int_rows else IntMatrix.zeros(0, nvars)
    x = solve_integer(a, int_rhs)
    if x is None:
        return None
    return x, integer_kernel(a)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def lll_reduce(basis: IntMatrix) -> IntMatrix:
    """LLL-reduced basis (columns) of the lattice with the given basis columns."""
    if basis.cols <= 1:
        return basis
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    rows = [[ZZ(x) for x in col] for col in basis.columns()]
    red = DomainMatrix(rows, (basis.cols, basis.rows), ZZ).lll().to_Matrix()
    cols = [[int(red[i, j]) for j in range(basis.rows)] for i in range(red.rows)]
    return IntMatrix.from_columns(cols, basis.rows)


def reduce_against(x: Sequence[int], basis: IntMatrix, rounds: int = 50) -> list[int]:
    """Shorten ``x`` by subtracting integer multiples of the basis columns."""
    x = list(x)
    cols = basis.columns()
    norms = [sum(c * c for c in col) for col in cols]
    for _ in range(rounds):
        changed = False
        for col, nn in zip(cols, norms):
            if not nn:
                continue
            k = round(Fraction(sum(a * b for a, b in zip(x, col)), nn))
            if k:
                x = [a - k * b for a, b in zip(x, col)]
                changed = True
        if not changed:
            break
    return x
