"""Exact dense linear algebra over a cyclotomic field.

Matrices are lists of lists of Cyclotomic.  Everything is fraction-free in
spirit but plain Gaussian elimination in practice; the matrices this package
meets are small enough (a few hundred rows) that exact pivoting is fine.
"""

from __future__ import annotations

from .cyclotomic import Cyclotomic

__all__ = [
    "mat_mul",
    "mat_vec",
    "identity_matrix",
    "mat_inverse",
    "rref",
    "rank",
    "nullspace",
    "solve_linear",
    "Span",
]

Matrix = list  # list[list[Cyclotomic]]


def identity_matrix(n: int, conductor: int) -> Matrix:
    one, zero = Cyclotomic.one(conductor), Cyclotomic.zero(conductor)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    zero = Cyclotomic.zero(a[0][0].conductor)
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            s = zero
            for l in range(k):
                if not ai[l].is_zero:
                    s = s + ai[l] * b[l][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(a: Matrix, v: list) -> list:
    zero = Cyclotomic.zero(v[0].conductor) if v else None
    out = []
    for row in a:
        s = zero
        for c, x in zip(row, v):
            if not c.is_zero:
                s = s + c * x
        out.append(s)
    return out


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = [row[:] for row in matrix]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = next((i for i in range(r, rows) if not m[i][c].is_zero), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Matrix, conductor: int | None = None) -> list[list]:
    """Basis of the right kernel {v : Av = 0}."""
    if not matrix or not matrix[0]:
        if conductor is None:
            raise ValueError("empty matrix needs explicit conductor")
        n = len(matrix[0]) if matrix else 0
        return [row[:] for row in identity_matrix(n, conductor)] if n else []
    conductor = matrix[0][0].conductor
    red, pivots = rref(matrix)
    cols = len(matrix[0])
    free = [c for c in range(cols) if c not in pivots]
    zero, one = Cyclotomic.zero(conductor), Cyclotomic.one(conductor)
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve_linear(matrix: Matrix, rhs: list) -> list | None:
    """One solution of Av = rhs, or None when inconsistent."""
    if not matrix:
        return [] if all(x.is_zero for x in rhs) else None
    conductor = rhs[0].conductor if rhs else matrix[0][0].conductor
    aug = [row[:] + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    cols = len(matrix[0])
    if cols in pivots:
        return None
    zero = Cyclotomic.zero(conductor)
    v = [zero] * cols
    for r, p in enumerate(pivots):
        v[p] = red[r][cols]
    return v


def mat_inverse(matrix: Matrix) -> Matrix:
    n = len(matrix)
    conductor = matrix[0][0].conductor
    aug = [row[:] + idrow for row, idrow in zip(matrix, identity_matrix(n, conductor))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


class Span:
    """Incrementally built row space with pivot bookkeeping.

    Vectors are lists of Cyclotomic of a fixed length.  ``add`` reduces the
    vector against the current basis and absorbs any nonzero residue,
    returning True when the span grew.
    """

    def __init__(self, dim: int, conductor: int):
        self.dim = dim
        self.conductor = conductor
        self.rows: list[list[Cyclotomic]] = []
        self.pivot_of_row: list[int] = []
        self._pivot_cols: dict[int, int] = {}  # column -> row index

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: list) -> list:
        v = vec[:]
        for col, r in sorted(self._pivot_cols.items()):
            c = v[col]
            if not c.is_zero:
                row = self.rows[r]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, vec: list) -> bool:
        v = self.reduce(vec)
        piv = next((i for i, c in enumerate(v) if not c.is_zero), None)
        if piv is None:
            return False
        inv = v[piv].inv()
        v = [c * inv for c in v]
        # back-substitute into existing rows so reduction stays one pass
        for i, row in enumerate(self.rows):
            c = row[piv]
            if not c.is_zero:
                self.rows[i] = [a - c * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivot_of_row.append(piv)
        self._pivot_cols[piv] = len(self.rows) - 1
        return True

    def contains(self, vec: list) -> bool:
        return all(c.is_zero for c in self.reduce(vec))

    def basis(self) -> list[list]:
        return [row[:] for row in self.rows]
