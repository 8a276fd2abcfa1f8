"""Exact brute-force solvers for small instances.

These are the ground truth the heuristic solvers and their approximation
bounds are tested against. Everything here favors obvious correctness and
determinism (lexicographically least optimum) over speed, and refuses
instances large enough to make exhaustive search dishonest.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .metrics import Dataset, Metric, as_dataset, get_metric

MAX_EXACT_VERTICES = 20
MAX_ENUM_VERTICES = 16
MAX_NEIGHBORHOOD = 32


class InstanceTooLarge(ValueError):
    """Instance exceeds what exhaustive search will honestly handle."""


class Graph:
    """Undirected graph on vertices 0..n-1 with bitmask adjacency."""

    def __init__(self, n: int, edges: Iterable[tuple]):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        self.n = n
        self.masks = [0] * n  # neighbors, self excluded
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            self.masks[u] |= 1 << v
            self.masks[v] |= 1 << u
        self.closed = [self.masks[i] | (1 << i) for i in range(n)]
        self.full = (1 << n) - 1

    def neighbors(self, v: int) -> "set[int]":
        return _bits(self.masks[v])

    def degree(self, v: int) -> int:
        return int(self.masks[v]).bit_count()

    def max_degree(self) -> int:
        return max(self.degree(v) for v in range(self.n))

    def edges(self) -> "list[tuple[int, int]]":
        return [(u, v) for u in range(self.n) for v in _bits(self.masks[u]) if v > u]

    def is_independent(self, vertices: Iterable[int]) -> bool:
        chosen = 0
        for v in vertices:
            if self.masks[v] & chosen:
                return False
            chosen |= 1 << v
        return True

    def is_dominating(self, vertices: Iterable[int]) -> bool:
        covered = 0
        for v in vertices:
            covered |= self.closed[v]
        return covered == self.full


def _bits(mask: int) -> "set[int]":
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return out


def build_disc_graph(points: "Dataset | Sequence", r: float, metric: "str | Metric") -> Graph:
    """Similarity graph: an edge wherever the pairwise distance is <= r."""
    ds = as_dataset(points)
    m = get_metric(metric)
    dmat = m.pairwise(ds.coords)
    n = len(ds)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if dmat[i, j] <= r]
    return Graph(n, edges)


def _check_size(g: Graph, limit: int):
    if g.n > limit:
        raise InstanceTooLarge(f"{g.n} vertices exceeds the exact-search limit of {limit}")


def _exists_dominating(g: Graph, k: int, independent: bool) -> bool:
    """Depth-limited branch search: does a (independent) dominating set of size k exist?"""

    def rec(chosen_mask: int, covered: int, left: int) -> bool:
        if covered == g.full:
            return True
        if left == 0:
            return False
        u = (~covered & g.full)
        u = (u & -u).bit_length() - 1  # lowest uncovered vertex
        for c in sorted(_bits(g.closed[u])):
            if chosen_mask & (1 << c):
                continue
            if independent and (g.masks[c] & chosen_mask):
                continue
            if rec(chosen_mask | (1 << c), covered | g.closed[c], left - 1):
                return True
        return False

    return rec(0, 0, k)


def _lex_least(g: Graph, k: int, independent: bool) -> "set[int]":
    for combo in combinations(range(g.n), k):
        if independent and not g.is_independent(combo):
            continue
        if g.is_dominating(combo):
            return set(combo)
    raise AssertionError("size was certified by the existence search")


def min_independent_dominating_set(g: Graph) -> "set[int]":
    """Minimum-cardinality independent dominating set, lexicographically least."""
    _check_size(g, MAX_EXACT_VERTICES)
    for k in range(1, g.n + 1):
        if _exists_dominating(g, k, independent=True):
            return _lex_least(g, k, independent=True)
    raise AssertionError("the full vertex set always dominates")


def min_dominating_set(g: Graph) -> "set[int]":
    """Minimum-cardinality dominating set without the independence constraint."""
    _check_size(g, MAX_EXACT_VERTICES)
    for k in range(1, g.n + 1):
        if _exists_dominating(g, k, independent=False):
            return _lex_least(g, k, independent=False)
    raise AssertionError("the full vertex set always dominates")


def enumerate_maximal_independent_sets(g: Graph) -> "set[frozenset[int]]":
    """All maximal independent sets; n is capped to keep this exhaustive."""
    _check_size(g, MAX_ENUM_VERTICES)
    out = set()
    for mask in range(1, 1 << g.n):
        vertices = _bits(mask)
        if not g.is_independent(vertices):
            continue
        maximal = True
        for v in range(g.n):
            if mask & (1 << v):
                continue
            if not (g.masks[v] & mask):
                maximal = False
                break
        if maximal:
            out.add(frozenset(vertices))
    return out


def _max_independent_set_size(masks: "list[int]", candidates: int) -> int:
    best = 0

    def rec(avail: int, size: int):
        nonlocal best
        if size + int(avail).bit_count() <= best:
            return
        if avail == 0:
            best = max(best, size)
            return
        v = (avail & -avail).bit_length() - 1
        rec(avail & ~(1 << v) & ~masks[v], size + 1)  # take v
        rec(avail & ~(1 << v), size)  # skip v
    rec(candidates, 0)
    return best


def max_independent_neighbors(points: "Dataset | Sequence", metric: "str | Metric",
                              r: float) -> int:
    """Largest set of pairwise-dissimilar objects inside any single neighborhood."""
    ds = as_dataset(points)
    m = get_metric(metric)
    dmat = m.pairwise(ds.coords)
    n = len(ds)
    best = 0
    for i in range(n):
        nbrs = [j for j in range(n) if j != i and dmat[i, j] <= r]
        if len(nbrs) > MAX_NEIGHBORHOOD:
            raise InstanceTooLarge(
                f"neighborhood of size {len(nbrs)} exceeds the exact limit of {MAX_NEIGHBORHOOD}")
        if len(nbrs) <= best:
            continue
        local_masks = []
        for a, u in enumerate(nbrs):
            mask = 0
            for b, v in enumerate(nbrs):
                if a != b and dmat[u, v] <= r:
                    mask |= 1 << b
            local_masks.append(mask)
        best = max(best, _max_independent_set_size(local_masks, (1 << len(nbrs)) - 1))
    return best


def optimal_maxmin(points: "Dataset | Sequence", k: int, metric: "str | Metric") -> "list[int]":
    """Exact MaxMin: the k-subset maximizing the least pairwise distance.

    Returns point ids; the lexicographically least optimum (by index order)
    wins ties. Enumerates all k-subsets, so n must stay small.
    """
    ds = as_dataset(points)
    n = len(ds)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if n > 14 and k not in (1, n):
        raise InstanceTooLarge(f"{n} points exceeds the exact MaxMin limit of 14")
    m = get_metric(metric)
    dmat = m.pairwise(ds.coords)
    best_combo = None
    best_val = -1.0
    for combo in combinations(range(n), k):
        val = np.inf
        for a in range(k):
            for b in range(a + 1, k):
                d = dmat[combo[a], combo[b]]
                if d < val:
                    val = d
                    if val <= best_val:
                        break
            if val <= best_val:
                break
        if val > best_val:
            best_val = val
            best_combo = combo
    return [int(ds.ids[i]) for i in best_combo]


def maxmin_value(points: "Dataset | Sequence", ids: Iterable[int],
                 metric: "str | Metric") -> float:
    """Least pairwise distance within the subset (inf for singletons)."""
    ds = as_dataset(points)
    m = get_metric(metric)
    idx = ds.indices_for(ids)
    if len(idx) < 2:
        return float("inf")
    sub = ds.coords[idx]
    dmat = m.pairwise(sub)
    tri = dmat[np.triu_indices(len(idx), k=1)]
    return float(tri.min())
