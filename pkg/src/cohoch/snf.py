"""Smith normal form over the integers with unimodular transforms.

Matrices are handled as lists of lists of Python ints so that entries never
overflow.  The public helpers accept anything ``numpy.asarray`` understands
and hand back ``numpy`` object arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

Matrix = List[List[int]]


def _as_lists(M) -> Matrix:
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise ValueError("expected a 2-d matrix")
        return [[int(x) for x in row] for row in M.tolist()]
    rows = [[int(x) for x in row] for row in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def to_array(M: Matrix, rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=object)
    for i, row in enumerate(M):
        for j, v in enumerate(row):
            out[i, j] = int(v)
    return out


@dataclass
class SNFResult:
    """Outcome of a Smith reduction ``U @ M @ V == D``.

    ``Uinv`` and ``Vinv`` are the exact inverses, tracked alongside so that
    homology computations never need a separate inversion.
    """

    rows: int
    cols: int
    diagonal: List[int]
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def D(self) -> Matrix:
        D = [[0] * self.cols for _ in range(self.rows)]
        for i, d in enumerate(self.diagonal):
            D[i][i] = d
        return D


class _Reducer:
    def __init__(self, A: Matrix, m: int, n: int, track: bool):
        self.A = A
        self.m = m
        self.n = n
        self.track = track
        if track:
            self.U = identity(m)
            self.Uinv = identity(m)
            self.V = identity(n)
            self.Vinv = identity(n)

    # row_i += k * row_j
    def add_row(self, i: int, j: int, k: int) -> None:
        A = self.A
        ri, rj = A[i], A[j]
        for c in range(self.n):
            if rj[c]:
                ri[c] += k * rj[c]
        if self.track:
            ui, uj = self.U[i], self.U[j]
            for c in range(self.m):
                if uj[c]:
                    ui[c] += k * uj[c]
            for row in self.Uinv:
                if row[i]:
                    row[j] -= k * row[i]

    # col_j += k * col_i
    def add_col(self, j: int, i: int, k: int) -> None:
        for row in self.A:
            if row[i]:
                row[j] += k * row[i]
        if self.track:
            for row in self.V:
                if row[i]:
                    row[j] += k * row[i]
            vi, vj = self.Vinv[i], self.Vinv[j]
            for c in range(self.n):
                if vj[c]:
                    vi[c] -= k * vj[c]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        A = self.A
        A[i], A[j] = A[j], A[i]
        if self.track:
            self.U[i], self.U[j] = self.U[j], self.U[i]
            for row in self.Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.A:
            row[i], row[j] = row[j], row[i]
        if self.track:
            for row in self.V:
                row[i], row[j] = row[j], row[i]
            self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def negate_row(self, i: int) -> None:
        self.A[i] = [-x for x in self.A[i]]
        if self.track:
            self.U[i] = [-x for x in self.U[i]]
            for row in self.Uinv:
                row[i] = -row[i]

    def pivot(self, t: int):
        best = None
        A = self.A
        for i in range(t, self.m):
            row = A[i]
            for j in range(t, self.n):
                v = row[j]
                if v:
                    a = v if v > 0 else -v
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            return best
        return best

    def run(self) -> List[int]:
        A = self.A
        diag: List[int] = []
        t = 0
        while t < min(self.m, self.n):
            p = self.pivot(t)
            if p is None:
                break
            while True:
                _, i, j = p
                self.swap_rows(t, i)
                self.swap_cols(t, j)
                piv = A[t][t]
                clean = True
                for r in range(t + 1, self.m):
                    v = A[r][t]
                    if v:
                        self.add_row(r, t, -(v // piv))
                        if A[r][t]:
                            clean = False
                for c in range(t + 1, self.n):
                    v = A[t][c]
                    if v:
                        self.add_col(c, t, -(v // piv))
                        if A[t][c]:
                            clean = False
                if clean:
                    bad = None
                    for r in range(t + 1, self.m):
                        row = A[r]
                        for c in range(t + 1, self.n):
                            if row[c] % piv:
                                bad = r
                                break
                        if bad is not None:
                            break
                    if bad is None:
                        break
                    self.add_row(t, bad, 1)
                p = self._local_pivot(t)
            if A[t][t] < 0:
                self.negate_row(t)
            diag.append(A[t][t])
            t += 1
        while len(diag) < min(self.m, self.n):
            diag.append(0)
        return diag

    def _local_pivot(self, t: int):
        # after a failed sweep the new minimum lives in row t or column t
        return self.pivot(t)


def snf_data(M, track: bool = True) -> SNFResult:
    A = _as_lists(M)
    m = len(A)
    n = len(A[0]) if A else (M.shape[1] if isinstance(M, np.ndarray) else 0)
    red = _Reducer([row[:] for row in A], m, n, track)
    diag = red.run()
    if track:
        return SNFResult(m, n, diag, red.U, red.Uinv, red.V, red.Vinv)
    return SNFResult(m, n, diag, [], [], [], [])


def smith_normal_form(M):
    """Return ``(D, U, V)`` with ``U @ M @ V == D``.

    ``D`` is diagonal with nonnegative entries, each dividing the next; ``U``
    and ``V`` are unimodular.  Pivots are chosen as the nonzero entry of
    least absolute value, ties going to the lowest ``(row, col)``.

    >>> D, U, V = smith_normal_form([[2, 4], [6, 8]])
    >>> [D[0, 0], D[1, 1]]
    [2, 4]
    """
    if isinstance(M, np.ndarray):
        m, n = M.shape
    else:
        m = len(M)
        n = len(M[0]) if m else 0
    res = snf_data(M)
    return to_array(res.D(), m, n), to_array(res.U, m, m), to_array(res.V, n, n)


def elementary_divisors(M) -> List[int]:
    res = snf_data(M, track=False)
    return [d for d in res.diagonal if d]


def determinant(M) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    A = _as_lists(M)
    n = len(A)
    if n == 0:
        return 1
    A = [row[:] for row in A]
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sgn = -sgn
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = [[0] * cols for _ in range(len(A))]
    for i, row in enumerate(A):
        o = out[i]
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        o[j] += a * bk[j]
    return out


class IntegerSolver:
    """Solve ``M x = b`` over the integers for many right-hand sides."""

    def __init__(self, M):
        A = _as_lists(M)
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        self.res = snf_data(A) if self.n else None
        if self.res is not None:
            # sparse rows of U and V speed up repeated products
            self._U = [[(k, v) for k, v in enumerate(row) if v] for row in self.res.U]
            self._V = [[(k, v) for k, v in enumerate(row) if v] for row in self.res.V]

    def solve(self, b) -> Optional[List[int]]:
        bb = [int(v) for v in b]
        if len(bb) != self.m:
            raise ValueError("right-hand side has the wrong length")
        if self.n == 0:
            return [] if not any(bb) else None
        diag = self.res.diagonal
        y = [0] * self.n
        for i, row in enumerate(self._U):
            u = sum(v * bb[k] for k, v in row)
            d = diag[i] if i < len(diag) else 0
            if d:
                if u % d:
                    return None
                y[i] = u // d
            elif u:
                return None
        return [sum(v * y[k] for k, v in row) for row in self._V]


def solve_integer(M, b) -> Optional[List[int]]:
    """Return an integer ``x`` with ``M x = b``, or ``None`` if none exists."""
    return IntegerSolver(M).solve(b)
