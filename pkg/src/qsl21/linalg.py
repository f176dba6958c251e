"""Sparse exact linear algebra over cyclotomic fields.

Matrices are {(row, col): Cyc} dicts; structural zeros are absent, hidden
zeros (nonempty term dicts that reduce to zero) are tolerated and flushed
during pivot searches.
"""
from __future__ import annotations

from .scalar import Cyc, primitive_scale


class Mat:
    """Sparse matrix over Q(zeta_N)."""

    __slots__ = ("rows", "cols", "N", "d")

    def __init__(self, rows: int, cols: int, N: int, d: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.N = N
        self.d = {} if d is None else {k: v for k, v in d.items() if v.c}

    @staticmethod
    def identity(n: int, N: int) -> Mat:
        return Mat(n, n, N, {(i, i): Cyc.one(N) for i in range(n)})

    def copy(self) -> Mat:
        return Mat(self.rows, self.cols, self.N, dict(self.d))

    def set(self, i: int, j: int, v: Cyc) -> None:
        assert 0 <= i < self.rows and 0 <= j < self.cols
        if v.c:
            self.d[(i, j)] = v
        else:
            self.d.pop((i, j), None)

    def get(self, i: int, j: int) -> Cyc:
        return self.d.get((i, j), Cyc.zero(self.N))

    def add_to(self, i: int, j: int, v: Cyc) -> None:
        w = self.d.get((i, j))
        w = v if w is None else w + v
        if w.c:
            self.d[(i, j)] = w
        else:
            self.d.pop((i, j), None)

    # -- ring operations

    def __add__(self, other: Mat) -> Mat:
        assert (self.rows, self.cols) == (other.rows, other.cols)
        out = self.copy()
        for k, v in other.d.items():
            out.add_to(*k, v)
        return out

    def __sub__(self, other: Mat) -> Mat:
        assert (self.rows, self.cols) == (other.rows, other.cols)
        out = self.copy()
        for (i, j), v in other.d.items():
            out.add_to(i, j, -v)
        return out

    def __neg__(self) -> Mat:
        return Mat(self.rows, self.cols, self.N, {k: -v for k, v in self.d.items()})

    def scale(self, s) -> Mat:
        return Mat(self.rows, self.cols, self.N, {k: v * s for k, v in self.d.items()})

    def __matmul__(self, other: Mat) -> Mat:
        assert self.cols == other.rows, f"{self.cols} != {other.rows}"
        bycol: dict[int, list] = {}
        for (i, j), v in self.d.items():
            bycol.setdefault(j, []).append((i, v))
        out = Mat(self.rows, other.cols, self.N)
        for (j, k), b in other.d.items():
            hits = bycol.get(j)
            if hits:
                for i, a in hits:
                    out.add_to(i, k, a * b)
        return out

    def transpose(self) -> Mat:
        return Mat(self.cols, self.rows, self.N, {(j, i): v for (i, j), v in self.d.items()})

    # -- predicates

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.d.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Mat is not hashable")

    def nnz(self) -> int:
        return sum(1 for v in self.d.values() if not v.is_zero())

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, nnz~{len(self.d)})"

    # -- assembly

    def submatrix(self, row_idx: list[int], col_idx: list[int]) -> Mat:
        rpos = {r: i for i, r in enumerate(row_idx)}
        cpos = {c: j for j, c in enumerate(col_idx)}
        out = Mat(len(row_idx), len(col_idx), self.N)
        for (i, j), v in self.d.items():
            if i in rpos and j in cpos:
                out.d[(rpos[i], cpos[j])] = v
        return out

    def hstack(self, other: Mat) -> Mat:
        assert self.rows == other.rows
        out = Mat(self.rows, self.cols + other.cols, self.N, dict(self.d))
        for (i, j), v in other.d.items():
            out.d[(i, j + self.cols)] = v
        return out

    def column(self, j: int) -> Mat:
        return Mat(self.rows, 1, self.N, {(i, 0): v for (i, jj), v in self.d.items() if jj == j})


# ---------------------------------------------------------------------------
# elimination


def rref(mat: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with leading ones; returns (R, pivot columns).

    Pivot rule: scan columns left to right, take the sparsest row with a
    nonzero entry (earliest on ties).  The reduced form is the same for any
    admissible pivot row, so downstream bases stay canonical; the sparsity
    preference only limits fill-in.  Each eliminated row is rescaled to its
    primitive integral representative, which keeps coefficients at the size
    of the underlying minors instead of letting numerators and denominators
    compound across pivot steps.  Leading ones are restored by a single
    inverse per pivot row at the end.
    """
    rows = [dict() for _ in range(mat.rows)]
    for (i, j), v in mat.d.items():
        rows[i][j] = v
    rows = [primitive_scale(row) for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(mat.cols):
        if r >= mat.rows:
            break
        pr = -1
        best = -1
        for i in range(r, mat.rows):
            v = rows[i].get(c)
            if v is not None:
                if v.is_zero():
                    del rows[i][c]
                elif pr < 0 or len(rows[i]) < best:
                    pr = i
                    best = len(rows[i])
        if pr < 0:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pinv = rows[r][c].inverse()
        for i in range(mat.rows):
            if i == r:
                continue
            f = rows[i].get(c)
            if f is None:
                continue
            if f.is_zero():
                del rows[i][c]
                continue
            factor = f * pinv
            new = dict(rows[i])
            for j, v in rows[r].items():
                t = v * factor
                w = new.get(j)
                new[j] = -t if w is None else w - t
            del new[c]
            rows[i] = primitive_scale(new)
        pivots.append(c)
        r += 1
    out = Mat(mat.rows, mat.cols, mat.N)
    for r, c in enumerate(pivots):
        inv = rows[r][c].inverse()
        for j, v in rows[r].items():
            v = v * inv
            if not v.is_zero():
                out.d[(r, j)] = v
    return out, pivots


def rank(mat: Mat) -> int:
    return len(rref(mat)[1])


def nullspace(mat: Mat) -> list[Mat]:
    """Canonical basis of the right kernel, as column vectors."""
    R, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(mat.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = Mat(mat.cols, 1, mat.N)
        v.d[(fc, 0)] = Cyc.one(mat.N)
        for r, pc in enumerate(pivots):
            entry = R.d.get((r, fc))
            if entry is not None and not entry.is_zero():
                v.d[(pc, 0)] = -entry
        basis.append(v)
    return basis


def invert(mat: Mat) -> Mat:
    """Inverse of a square matrix; raises on singular input."""
    assert mat.rows == mat.cols
    n = mat.rows
    R, pivots = rref(mat.hstack(Mat.identity(n, mat.N)))
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return R.submatrix(list(range(n)), list(range(n, 2 * n)))
