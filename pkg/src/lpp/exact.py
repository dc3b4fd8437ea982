"""Exact W_n: exhaustive enumeration (tiny n) and interior-subset DP (n <= 22).

Both solvers accumulate weights along the path from vertex 1 onwards, so on
shared instances they return bit-identical values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import PreconditionError
from .graph import EdgeWeights, num_pairs, pair_arrays
from .paths import Path

BRUTE_FORCE_MAX_N = 10
DP_MAX_N = 22


@dataclass(frozen=True)
class ExactResult:
    value: float
    witness: Path


def brute_force_wn(w: EdgeWeights) -> ExactResult:
    """Enumerate every self-avoiding 1 -> n path in lexicographic order."""
    n = w.n
    if n > BRUTE_FORCE_MAX_N:
        raise PreconditionError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    mat = w.matrix().tolist()
    best_value = -np.inf
    best_path: list[int] = []
    path = [1]
    used = [False] * (n + 1)
    used[1] = True

    def extend(last: int, total: float) -> None:
        nonlocal best_value, best_path
        for v in range(2, n + 1):
            if used[v]:
                continue
            t = total + mat[last][v]
            if v == n:
                if t > best_value:
                    best_value = t
                    best_path = path + [n]
                continue
            used[v] = True
            path.append(v)
            extend(v, t)
            path.pop()
            used[v] = False

    extend(1, 0.0)
    return ExactResult(best_value, Path(tuple(best_path)))


@numba.njit(cache=True)
def _weight_matrix(n, w):
    mat = np.zeros((n + 1, n + 1))
    k = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            mat[i, j] = w[k]
            mat[j, i] = w[k]
            k += 1
    return mat


@numba.njit(cache=True)
def _dp_table(n, w, want_parent):
    # interior vertex v = bit index + 2
    mat = _weight_matrix(n, w)
    m = n - 2
    full = 1 << m
    best = np.full((full, m), -np.inf)
    parent = np.full((full if want_parent else 1, m), -1, dtype=np.int8)
    for i in range(m):
        best[1 << i, i] = mat[1, i + 2]
    for mask in range(1, full):
        for v in range(m):
            b = best[mask, v]
            if b == -np.inf:
                continue
            row = mat[v + 2]
            for u in range(m):
                if mask & (1 << u):
                    continue
                c = b + row[u + 2]
                nm = mask | (1 << u)
                if c > best[nm, u]:
                    best[nm, u] = c
                    if want_parent:
                        parent[nm, u] = v
    value = mat[1, n]
    end_mask = -1
    end_v = -1
    for mask in range(1, full):
        for v in range(m):
            b = best[mask, v]
            if b == -np.inf:
                continue
            c = b + mat[v + 2, n]
            if c > value:
                value = c
                end_mask = mask
                end_v = v
    return value, end_mask, end_v, parent


@numba.njit(cache=True)
def _dp_value(n, w):
    return _dp_table(n, w, False)[0]


@numba.njit(cache=True)
def _dp_values(n, rows, batch):
    # Same recursion as _dp_table, run on `batch` instances at once with the
    # replicate index innermost so the max-updates vectorize.
    m = n - 2
    full = 1 << m
    out = np.empty(rows.shape[0])
    best = np.empty((full, m, batch))
    mat = np.empty((n + 1, n + 1, batch))
    val = np.empty(batch)
    for r0 in range(0, rows.shape[0], batch):
        nb = min(batch, rows.shape[0] - r0)
        for b in range(nb):
            k = 0
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    mat[i, j, b] = rows[r0 + b, k]
                    mat[j, i, b] = rows[r0 + b, k]
                    k += 1
        best[:, :, :] = -np.inf
        for i in range(m):
            for b in range(nb):
                best[1 << i, i, b] = mat[1, i + 2, b]
        for b in range(nb):
            val[b] = mat[1, n, b]
        for mask in range(1, full):
            for v in range(m):
                if not (mask >> v) & 1:
                    continue
                src = best[mask, v]
                to_sink = mat[v + 2, n]
                for b in range(nb):
                    val[b] = max(val[b], src[b] + to_sink[b])
                row = mat[v + 2]
                for u in range(m):
                    if (mask >> u) & 1:
                        continue
                    dst = best[mask | (1 << u), u]
                    wu = row[u + 2]
                    for b in range(nb):
                        dst[b] = max(dst[b], src[b] + wu[b])
        for b in range(nb):
            out[r0 + b] = val[b]
    return out


def _batch_size(n: int) -> int:
    cells = (1 << (n - 2)) * (n - 2)
    return max(1, min(64, (1 << 22) // cells))


def _check_dp_size(n: int) -> None:
    if n > DP_MAX_N:
        raise PreconditionError(f"subset DP limited to n <= {DP_MAX_N}, got {n}")


def exact_wn(w: EdgeWeights) -> ExactResult:
    n = w.n
    _check_dp_size(n)
    value, end_mask, end_v, parent = _dp_table(n, w.w, True)
    if end_mask < 0:
        return ExactResult(float(value), Path((1, n)))
    interior = []
    mask, v = int(end_mask), int(end_v)
    while v >= 0:
        interior.append(v + 2)
        prev = int(parent[mask, v])
        mask ^= 1 << v
        v = prev
    return ExactResult(float(value), Path((1, *reversed(interior), n)))


def exact_values(n: int, rows: np.ndarray) -> np.ndarray:
    """W_n for each row of a (replicates, C(n,2)) weight array."""
    _check_dp_size(n)
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != num_pairs(n):
        raise PreconditionError(f"expected rows of length {num_pairs(n)}")
    if n == 2:
        return rows[:, 0].copy()
    return _dp_values(n, rows, _batch_size(n))


def window(w: EdgeWeights, m: int, k: int) -> EdgeWeights:
    """Weights of the complete graph on {m+1, ..., k}, relabelled to 1..k-m."""
    i, j = pair_arrays(w.n)
    keep = (i > m) & (j <= k)
    return EdgeWeights(k - m, w.w[keep])


def exact_wmn(w: EdgeWeights, m: int, k: int) -> float:
    """Largest passage time from m+1 to k inside the window {m+1, ..., k}."""
    if not (0 <= m < k <= w.n):
        raise PreconditionError(f"need 0 <= m < k <= n, got m={m}, k={k}, n={w.n}")
    if k - m > DP_MAX_N:
        raise PreconditionError(f"window of {k - m} vertices exceeds DP limit {DP_MAX_N}")
    if k - m == 1:
        return 0.0
    sub = window(w, m, k)
    if sub.n == 2:
        return float(sub.w[0])
    return float(_dp_value(sub.n, sub.w))
