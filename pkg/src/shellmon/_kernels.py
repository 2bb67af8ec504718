"""Hot numeric kernels: weighted (masked, scaled) distance scans.

The clustering loop evaluates one realization-to-centroid scan per ingest and
an occasional full pairwise centroid scan, both over a per-dimension weight
vector w_i = mask_i / scale_i**2.  These are the inner loops that dominate
long monitoring runs, so they are JIT-compiled with numba.

Set SHELLMON_NO_NUMBA=1 to force the pure-numpy fallbacks (same semantics,
vectorized).  The numpy implementations are always importable under their
``*_numpy`` names so the two paths can be compared in-process; see
benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

import numpy as np

_NO_NUMBA_FLAG = os.environ.get("SHELLMON_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}


def weighted_sq_dists_numpy(points: np.ndarray, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Squared weighted distances from x to every row of points."""
    diff = points - x[None, :]
    return (diff * diff) @ w


def nearest_weighted_numpy(points: np.ndarray, x: np.ndarray, w: np.ndarray) -> tuple[int, float]:
    """Index and distance of the row of points nearest to x (first index on ties)."""
    d2 = weighted_sq_dists_numpy(points, x, w)
    k = int(np.argmin(d2))
    return k, float(np.sqrt(d2[k]))


def min_weighted_pair_numpy(points: np.ndarray, w: np.ndarray) -> tuple[int, int, float]:
    """Closest pair (j, k, distance) over the upper triangle, j < k.

    Ties resolve to the lexicographically smallest (j, k): the row-major
    argmin over the strict upper triangle guarantees that.
    """
    n = points.shape[0]
    diff = points[:, None, :] - points[None, :, :]
    d2 = (diff * diff) @ w
    iu = np.triu_indices(n, k=1)
    flat = d2[iu]
    p = int(np.argmin(flat))
    return int(iu[0][p]), int(iu[1][p]), float(np.sqrt(flat[p]))


_HAVE_NUMBA = False
if not _NO_NUMBA_FLAG:
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _weighted_sq_dists_jit(points, x, w):
        n, d = points.shape
        out = np.empty(n)
        for i in range(n):
            s = 0.0
            for j in range(d):
                t = points[i, j] - x[j]
                s += w[j] * t * t
            out[i] = s
        return out

    @njit(cache=True)
    def _nearest_weighted_jit(points, x, w):
        n, d = points.shape
        best = np.inf
        best_i = 0
        for i in range(n):
            s = 0.0
            for j in range(d):
                t = points[i, j] - x[j]
                s += w[j] * t * t
            if s < best:
                best = s
                best_i = i
        return best_i, np.sqrt(best)

    @njit(cache=True)
    def _min_weighted_pair_jit(points, w):
        n, d = points.shape
        best = np.inf
        bj = 0
        bk = 1
        for j in range(n - 1):
            for k in range(j + 1, n):
                s = 0.0
                for m in range(d):
                    t = points[j, m] - points[k, m]
                    s += w[m] * t * t
                if s < best:
                    best = s
                    bj = j
                    bk = k
        return bj, bk, np.sqrt(best)

    def weighted_sq_dists(points: np.ndarray, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        return _weighted_sq_dists_jit(points, x, w)

    def nearest_weighted(points: np.ndarray, x: np.ndarray, w: np.ndarray) -> tuple[int, float]:
        i, dist = _nearest_weighted_jit(points, x, w)
        return int(i), float(dist)

    def min_weighted_pair(points: np.ndarray, w: np.ndarray) -> tuple[int, int, float]:
        j, k, dist = _min_weighted_pair_jit(points, w)
        return int(j), int(k), float(dist)

else:
    weighted_sq_dists = weighted_sq_dists_numpy
    nearest_weighted = nearest_weighted_numpy
    min_weighted_pair = min_weighted_pair_numpy


def numba_enabled() -> bool:
    """True when the JIT kernels are active (numba importable and not disabled)."""
    return _HAVE_NUMBA
