"""Exact integer linear algebra: Smith normal form, ranks, kernels, cokernels.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so nothing
ever overflows.  Two reduction paths exist:

* :func:`smith_normal_form` is a dense reduction that also returns the
  unimodular transforms (and optionally their inverses).  The pivot is always
  the nonzero entry of least absolute value in the active block, ties broken by
  smallest row and then smallest column.
* :func:`smith_invariants` only produces the invariant factors.  It first
  eliminates unit pivots on a sparse copy, which is how boundary matrices of
  cell complexes with a few thousand cells stay tractable, and hands whatever
  is left to the dense routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import SolveFailure

_INT64_SAFE = 2**62


def as_int_matrix(a, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Coerce ``a`` to a 2-D object array of Python ints."""
    if isinstance(a, np.ndarray) and a.dtype == object and a.ndim == 2:
        return a
    arr = np.array(a, dtype=object)
    if arr.size == 0:
        if shape is None:
            shape = arr.shape if arr.ndim == 2 else (0, 0)
        return np.zeros(shape, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr)


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(x)) for x in a.flat)


def matmul_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; runs in int64 when the entries are provably small."""
    a = as_int_matrix(a)
    b = as_int_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    bound = _max_abs(a) * _max_abs(b) * max(a.shape[1], 1)
    if bound < _INT64_SAFE:
        prod = a.astype(np.int64) @ b.astype(np.int64)
        return prod.astype(object)
    return a.dot(b)


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(a).flat)


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------

@dataclass
class SmithDecomposition:
    """``left @ A @ right == diag`` with unimodular ``left`` and ``right``."""

    left: np.ndarray
    diag: np.ndarray
    right: np.ndarray
    original_rows: int
    original_cols: int
    left_inv: Optional[np.ndarray] = field(default=None, repr=False)
    right_inv: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def invariants(self) -> List[int]:
        """Nonzero diagonal entries, in order (each divides the next)."""
        k = min(self.diag.shape)
        out = []
        for i in range(k):
            d = int(self.diag[i, i])
            if d == 0:
                break
            out.append(d)
        return out

    @property
    def rank(self) -> int:
        return len(self.invariants)


def _argmin_abs(block: np.ndarray) -> Optional[Tuple[int, int]]:
    best = None
    best_val = None
    rows, cols = np.nonzero(block != 0)
    for i, j in zip(rows.tolist(), cols.tolist()):
        v = abs(block[i, j])
        if best_val is None or v < best_val:
            best_val = v
            best = (i, j)
            if v == 1:
                break
    return best


def smith_normal_form(a, inverses: bool = False) -> SmithDecomposition:
    """Smith normal form with transforms.

    Args:
        a: integer matrix (anything :func:`as_int_matrix` accepts).
        inverses: also accumulate ``left_inv`` and ``right_inv``.

    Returns:
        A :class:`SmithDecomposition`; the diagonal entries are non-negative,
        each divides the next, and the zeros trail.
    """
    D = as_int_matrix(a).copy()
    m, n = D.shape
    L = identity(m)
    R = identity(n)
    Linv = identity(m) if inverses else None
    Rinv = identity(n) if inverses else None

    def swap_rows(i, j):
        if i == j:
            return
        D[[i, j], :] = D[[j, i], :]
        L[[i, j], :] = L[[j, i], :]
        if inverses:
            Linv[:, [i, j]] = Linv[:, [j, i]]

    def swap_cols(i, j):
        if i == j:
            return
        D[:, [i, j]] = D[:, [j, i]]
        R[:, [i, j]] = R[:, [j, i]]
        if inverses:
            Rinv[[i, j], :] = Rinv[[j, i], :]

    t = 0
    while t < min(m, n):
        pos = _argmin_abs(D[t:, t:])
        if pos is None:
            break
        swap_rows(t, t + pos[0])
        swap_cols(t, t + pos[1])
        while True:
            p = D[t, t]
            below = np.nonzero(D[t + 1:, t] != 0)[0] + t + 1
            if below.size:
                q = D[below, t] // p
                D[below, :] -= np.outer(q, D[t, :])
                L[below, :] -= np.outer(q, L[t, :])
                if inverses:
                    Linv[:, t] += Linv[:, below].dot(q)
            right = np.nonzero(D[t, t + 1:] != 0)[0] + t + 1
            if right.size:
                q = D[t, right] // p
                D[:, right] -= np.outer(D[:, t], q)
                R[:, right] -= np.outer(R[:, t], q)
                if inverses:
                    Rinv[t, :] += q.dot(Rinv[right, :])
            col_left = np.nonzero(D[t + 1:, t] != 0)[0]
            row_left = np.nonzero(D[t, t + 1:] != 0)[0]
            if col_left.size == 0 and row_left.size == 0:
                rest = D[t + 1:, t + 1:]
                bad = np.nonzero(rest % p != 0) if rest.size else (np.array([]),)
                if bad[0].size == 0:
                    break
                r = int(bad[0][0]) + t + 1
                D[t, :] += D[r, :]
                L[t, :] += L[r, :]
                if inverses:
                    Linv[:, r] -= Linv[:, t]
                continue
            # a remainder survived: move the smallest one onto the pivot
            best = None
            for i in col_left.tolist():
                v = abs(D[t + 1 + i, t])
                if best is None or v < best[0]:
                    best = (v, "r", t + 1 + i)
            for j in row_left.tolist():
                v = abs(D[t, t + 1 + j])
                if best is None or v < best[0]:
                    best = (v, "c", t + 1 + j)
            if best[1] == "r":
                swap_rows(t, best[2])
            else:
                swap_cols(t, best[2])
        if D[t, t] < 0:
            D[t, :] = -D[t, :]
            L[t, :] = -L[t, :]
            if inverses:
                Linv[:, t] = -Linv[:, t]
        t += 1

    return SmithDecomposition(L, D, R, m, n, Linv, Rinv)


def _sparse_rows(a: np.ndarray):
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    nz_r, nz_c = np.nonzero(a != 0)
    for i, j in zip(nz_r.tolist(), nz_c.tolist()):
        rows.setdefault(i, {})[j] = int(a[i, j])
        cols.setdefault(j, set()).add(i)
    return rows, cols


def smith_invariants(a) -> List[int]:
    """Nonzero invariant factors of ``a`` (same list as the Smith diagonal).

    Unit pivots are eliminated on a sparse copy first: for each column in
    increasing order, a row holding a +-1 there is chosen (shortest row, then
    smallest index), the column is cleared with row operations and the pivot
    row is dropped, which column operations against the now-isolated pivot
    would do anyway.  The residual block goes through the dense reduction.
    """
    a = as_int_matrix(a)
    rows, cols = _sparse_rows(a)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            col = cols.get(j)
            if not col:
                continue
            cand = [i for i in col if abs(rows[i][j]) == 1]
            if not cand:
                continue
            i = min(cand, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(i)
            for jj in prow:
                cols[jj].discard(i)
            s = prow[j]
            for i2 in list(cols[j]):
                row2 = rows[i2]
                f = row2[j] * s
                for jj, v in prow.items():
                    nv = row2.get(jj, 0) - f * v
                    if nv:
                        if jj not in row2:
                            cols[jj].add(i2)
                        row2[jj] = nv
                    elif jj in row2:
                        del row2[jj]
                        cols[jj].discard(i2)
                if not row2:
                    del rows[i2]
            for jj in prow:
                if not cols[jj]:
                    del cols[jj]
            units += 1
            progress = True
    if not rows:
        return [1] * units
    r_idx = sorted(rows)
    c_idx = sorted(cols)
    rpos = {r: k for k, r in enumerate(r_idx)}
    cpos = {c: k for k, c in enumerate(c_idx)}
    rest = zeros(len(r_idx), len(c_idx))
    for r, row in rows.items():
        for c, v in row.items():
            rest[rpos[r], cpos[c]] = v
    return [1] * units + smith_normal_form(rest).invariants


def rank(a) -> int:
    return len(smith_invariants(a))


def kernel_matrix(a) -> Tuple[np.ndarray, SmithDecomposition]:
    """Columns form a saturated basis of ``{x : a @ x == 0}``.

    Also returns the decomposition (with inverses) so callers can express
    kernel vectors in this basis.
    """
    a = as_int_matrix(a)
    snf = smith_normal_form(a, inverses=True)
    return snf.right[:, snf.rank:], snf


def kernel_basis(a) -> List[List[int]]:
    """Saturated integer basis of the right kernel, as a list of vectors."""
    K, _ = kernel_matrix(a)
    return [[int(x) for x in K[:, k]] for k in range(K.shape[1])]


def kernel_coordinates(snf: SmithDecomposition, vectors: np.ndarray) -> np.ndarray:
    """Coordinates of kernel vectors (as columns) in the basis of :func:`kernel_matrix`.

    Raises :class:`SolveFailure` if some column is not in the kernel lattice.
    """
    if snf.right_inv is None:
        raise ValueError("decomposition was computed without inverses")
    y = matmul_exact(snf.right_inv, as_int_matrix(vectors, (snf.original_cols, 0)))
    if not is_zero(y[: snf.rank, :]):
        raise SolveFailure("vector is not in the kernel lattice")
    return y[snf.rank:, :]


def cokernel_invariants(a) -> Tuple[int, List[int]]:
    """``(free_rank, torsion)`` of ``Z^rows / image(a)``."""
    a = as_int_matrix(a)
    inv = smith_invariants(a)
    return a.shape[0] - len(inv), [d for d in inv if d > 1]


def determinant(a) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in as_int_matrix(a)]
    n = len(M)
    if n == 0:
        return 1
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# Homology of a chain complex
# --------------------------------------------------------------------------

@dataclass
class HomologySummary:
    betti: List[int]
    torsion: List[List[int]]

    def as_dict(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def homology_from_boundaries(cell_counts: Sequence[int], boundaries: Sequence) -> HomologySummary:
    """Integral homology of ``C_top -> ... -> C_0``.

    ``boundaries[k-1]`` is the matrix of ``d_k: C_k -> C_{k-1}`` (rows indexed
    by (k-1)-cells).
    """
    top = len(cell_counts) - 1
    invs = [smith_invariants(b) if np.asarray(b).size else [] for b in boundaries]
    ranks = [len(x) for x in invs]
    betti = []
    torsion = []
    for k in range(top + 1):
        r_out = ranks[k - 1] if k >= 1 else 0
        r_in = ranks[k] if k < top else 0
        betti.append(cell_counts[k] - r_out - r_in)
        torsion.append([d for d in invs[k] if d > 1] if k < top else [])
    return HomologySummary(betti, torsion)


# --------------------------------------------------------------------------
# Exact rational solves
# --------------------------------------------------------------------------

def solve_rational(equations: Sequence[Dict[int, int]], rhs: Sequence, n_vars: int) -> List[Fraction]:
    """One solution of a sparse linear system over Q (free variables set to 0).

    Each equation is a dict ``{variable: coefficient}``.  Raises
    :class:`SolveFailure` when the system is inconsistent.
    """
    pivots: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}
    for eq, b in zip(equations, rhs):
        row = {k: Fraction(v) for k, v in eq.items() if v}
        val = Fraction(b)
        while row:
            lead = min(row)
            if lead not in pivots:
                break
            prow, pval = pivots[lead]
            f = row[lead]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            val -= f * pval
        if not row:
            if val != 0:
                raise SolveFailure("inconsistent linear system")
            continue
        lead = min(row)
        c = row[lead]
        pivots[lead] = ({k: v / c for k, v in row.items()}, val / c)
    x = [Fraction(0)] * n_vars
    for lead in sorted(pivots, reverse=True):
        prow, pval = pivots[lead]
        x[lead] = pval - sum(v * x[k] for k, v in prow.items() if k != lead)
    return x
