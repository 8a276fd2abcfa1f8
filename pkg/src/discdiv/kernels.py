"""Hot numeric kernels behind the distance machinery.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
fallback. The numpy path is selected when numba is missing or when the
environment variable ``DISCDIV_PURE_NUMPY`` is set to 1/true/yes.
``benchmarks/kernel_bench.py`` times the two side by side.

Coordinates are always float64 matrices; categorical data is stored as
integer category codes in float64 (exact for the code ranges involved),
so the hamming kernel is a plain inequality count.

Metric codes: 0 = euclidean, 1 = manhattan, 2 = hamming.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    HAVE_NUMBA = False

EUCLIDEAN_CODE = 0
MANHATTAN_CODE = 1
HAMMING_CODE = 2

_CHUNK = 1024  # rows per block in the numpy fallbacks, bounds temp memory


def numba_requested() -> bool:
    flag = os.environ.get("DISCDIV_PURE_NUMPY", "").strip().lower()
    return flag not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# pure-numpy implementations


def np_dists_to_point(X, q, code):
    if code == EUCLIDEAN_CODE:
        return np.sqrt(((X - q) ** 2).sum(axis=1))
    if code == MANHATTAN_CODE:
        return np.abs(X - q).sum(axis=1)
    return (X != q).sum(axis=1).astype(np.float64)


def np_pairwise_dists(X, code):
    n = X.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        out[i] = np_dists_to_point(X, X[i], code)
    return out


def np_neighbor_counts(X, r, code):
    n = X.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        for i in range(start, stop):
            counts[i] = int((np_dists_to_point(X, X[i], code) <= r).sum()) - 1
    return counts


def np_min_dist_to_set(X, S, code):
    n = X.shape[0]
    out = np.full(n, np.inf)
    if S.shape[0] == 0:
        return out
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        block = X[start:stop]
        best = np.full(stop - start, np.inf)
        for j in range(S.shape[0]):
            np.minimum(best, np_dists_to_point(block, S[j], code), out=best)
        out[start:stop] = best
    return out


def np_count_within(X, S, r, code):
    n = X.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        block = X[start:stop]
        acc = np.zeros(stop - start, dtype=np.int64)
        for j in range(S.shape[0]):
            acc += np_dists_to_point(block, S[j], code) <= r
        out[start:stop] = acc
    return out


def np_farthest_pair(X, code):
    n = X.shape[0]
    best_i, best_j, best_d = 0, 0, -1.0
    for i in range(n):
        d = np_dists_to_point(X[i + 1 :], X[i], code)
        if d.size == 0:
            continue
        k = int(np.argmax(d))
        if d[k] > best_d:
            best_i, best_j, best_d = i, i + 1 + k, float(d[k])
    return best_i, best_j, max(best_d, 0.0)


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _dist(X, i, q, code):
        d = X.shape[1]
        if code == 0:
            s = 0.0
            for j in range(d):
                diff = X[i, j] - q[j]
                s += diff * diff
            return math.sqrt(s)
        elif code == 1:
            s = 0.0
            for j in range(d):
                s += abs(X[i, j] - q[j])
            return s
        else:
            c = 0.0
            for j in range(d):
                if X[i, j] != q[j]:
                    c += 1.0
            return c

    @njit(cache=True)
    def nb_dists_to_point(X, q, code):
        n = X.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = _dist(X, i, q, code)
        return out

    @njit(cache=True)
    def nb_pairwise_dists(X, code):
        n = X.shape[0]
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                d = _dist(X, i, X[j], code)
                out[i, j] = d
                out[j, i] = d
        return out

    @njit(cache=True)
    def nb_neighbor_counts(X, r, code):
        n = X.shape[0]
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                if _dist(X, i, X[j], code) <= r:
                    counts[i] += 1
                    counts[j] += 1
        return counts

    @njit(cache=True)
    def nb_min_dist_to_set(X, S, code):
        n = X.shape[0]
        out = np.full(n, np.inf)
        for i in range(n):
            for j in range(S.shape[0]):
                d = _dist(S, j, X[i], code)
                if d < out[i]:
                    out[i] = d
        return out

    @njit(cache=True)
    def nb_count_within(X, S, r, code):
        n = X.shape[0]
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            c = 0
            for j in range(S.shape[0]):
                if _dist(S, j, X[i], code) <= r:
                    c += 1
            out[i] = c
        return out

    @njit(cache=True)
    def nb_farthest_pair(X, code):
        n = X.shape[0]
        bi, bj, bd = 0, 0, -1.0
        for i in range(n):
            for j in range(i + 1, n):
                d = _dist(X, i, X[j], code)
                if d > bd:
                    bi, bj, bd = i, j, d
        if bd < 0.0:
            bd = 0.0
        return bi, bj, bd

else:  # pragma: no cover
    nb_dists_to_point = None
    nb_pairwise_dists = None
    nb_neighbor_counts = None
    nb_min_dist_to_set = None
    nb_count_within = None
    nb_farthest_pair = None


USING_NUMBA = HAVE_NUMBA and numba_requested()

if USING_NUMBA:
    dists_to_point = nb_dists_to_point
    pairwise_dists = nb_pairwise_dists
    neighbor_counts = nb_neighbor_counts
    min_dist_to_set = nb_min_dist_to_set
    count_within = nb_count_within
    farthest_pair = nb_farthest_pair
else:
    dists_to_point = np_dists_to_point
    pairwise_dists = np_pairwise_dists
    neighbor_counts = np_neighbor_counts
    min_dist_to_set = np_min_dist_to_set
    count_within = np_count_within
    farthest_pair = np_farthest_pair
