"""Dense linear algebra over any of the working fields.

Matrices are lists of row lists.  Functions that need to test for zero or
produce identities take the field descriptor from :mod:`qmk.fields`.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list]


def identity(field, n: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field, rows: int, cols: int) -> Matrix:
    return [[field.zero] * cols for _ in range(rows)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[] for _ in a]
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def trace_of_product(a: Matrix, b: Matrix):
    """Tr(a b) without forming the product."""
    acc = None
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            t = x * b[j][i]
            acc = t if acc is None else acc + t
    return acc


def trace(a: Matrix):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def scale(a: Matrix, c) -> Matrix:
    return [[c * x for x in row] for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def block_diag(field, blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(field, n, n)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def _pivot_row(field, m: Matrix, col: int, start: int) -> int | None:
    if field.exact:
        for r in range(start, len(m)):
            if not field.is_zero(m[r][col]):
                return r
        return None
    best, best_abs = None, field.tol
    for r in range(start, len(m)):
        v = abs(m[r][col])
        if v > best_abs:
            best, best_abs = r, v
    return best


def rref(field, a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = _pivot_row(field, m, c, r)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(field, a: Matrix) -> list[list]:
    """Basis of {v : a v = 0}, one vector per free column."""
    cols = len(a[0])
    m, pivots = rref(field, a)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [field.zero] * cols
        v[free] = field.one
        for row, pc in zip(m, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def inverse(field, a: Matrix) -> Matrix:
    n = len(a)
    if n == 1:
        if field.is_zero(a[0][0]):
            raise ZeroDivisionError("singular matrix")
        return [[field.one / a[0][0]]]
    if n == 2:
        (p, q), (r, s) = a
        det = p * s - q * r
        if field.is_zero(det):
            raise ZeroDivisionError("singular matrix")
        inv = field.one / det
        return [[s * inv, -q * inv], [-r * inv, p * inv]]
    if n == 3:
        (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = a
        cof = [
            [b1 * c2 - b2 * c1, a2 * c1 - a1 * c2, a1 * b2 - a2 * b1],
            [b2 * c0 - b0 * c2, a0 * c2 - a2 * c0, a2 * b0 - a0 * b2],
            [b0 * c1 - b1 * c0, a1 * c0 - a0 * c1, a0 * b1 - a1 * b0],
        ]
        det = a0 * cof[0][0] + a1 * cof[1][0] + a2 * cof[2][0]
        if field.is_zero(det):
            raise ZeroDivisionError("singular matrix")
        inv = field.one / det
        return [[x * inv for x in row] for row in cof]
    aug = [list(row) + e for row, e in zip(a, identity(field, n))]
    m, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def determinant(field, a: Matrix):
    m = [list(row) for row in a]
    n = len(m)
    det = field.one
    for c in range(n):
        p = _pivot_row(field, m, c, c)
        if p is None:
            return field.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = field.one / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if not field.is_zero(f):
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def charpoly(a: Matrix) -> list:
    """det(xI - a) by Berkowitz's division-free algorithm; highest degree first.

    Works over any commutative ring whose elements support ``+ - *`` with ints.
    """
    n = len(a)
    if n == 0:
        return [1]
    # vect holds the char poly of the leading r x r block, highest first
    vect = [1, -a[0][0]]
    for r in range(1, n):
        col = [a[i][r] for i in range(r)]  # C
        row = a[r][:r]  # R
        diag = a[r][r]
        # Toeplitz entries: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
        toep = [1, -diag]
        v = col
        for _ in range(r):
            s = 0
            for x, y in zip(row, v):
                s = s + x * y
            toep.append(-s)
            v = [sum((a[i][j] * v[j] for j in range(r)), 0) for i in range(r)]
        new = []
        for k in range(r + 2):
            s = 0
            for j in range(min(k, r) + 1):
                if k - j < len(toep):
                    s = s + toep[k - j] * vect[j]
            new.append(s)
        vect = new
    return vect


class SparseMatrix:
    """Row-major dict-of-dicts matrix; entries equal to zero are not stored."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.data: dict[int, dict[int, object]] = data if data is not None else {}

    @classmethod
    def identity(cls, field, n: int) -> SparseMatrix:
        return cls(n, n, {i: {i: field.one} for i in range(n)})

    def set(self, r: int, c: int, value) -> None:
        self.data.setdefault(r, {})[c] = value

    def add_to(self, r: int, c: int, value) -> None:
        row = self.data.setdefault(r, {})
        row[c] = row[c] + value if c in row else value

    def entries(self):
        for r, row in self.data.items():
            for c, v in row.items():
                yield r, c, v

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.rows, other.cols)
        for r, row in self.data.items():
            acc: dict = {}
            for k, v in row.items():
                for c, w in other.data.get(k, {}).items():
                    acc[c] = acc[c] + v * w if c in acc else v * w
            if acc:
                out.data[r] = acc
        return out

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        out = SparseMatrix(self.rows, self.cols, {r: dict(row) for r, row in self.data.items()})
        for r, c, v in other.entries():
            out.add_to(r, c, v)
        return out

    def scaled(self, c) -> SparseMatrix:
        return SparseMatrix(self.rows, self.cols, {r: {k: c * v for k, v in row.items()} for r, row in self.data.items()})

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + other.scaled(-1)

    def max_abs(self) -> float:
        return max((abs(complex(v)) for _, _, v in self.entries()), default=0.0)

    def is_zero(self, field) -> bool:
        return all(field.is_zero(v) for _, _, v in self.entries())

    def to_dense(self, field) -> Matrix:
        out = zeros(field, self.rows, self.cols)
        for r, c, v in self.entries():
            out[r][c] = v
        return out
