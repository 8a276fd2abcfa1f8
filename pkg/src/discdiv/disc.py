"""Covering/dissimilar subset solvers over the metric tree.

All solvers share a white/grey/black coloring: white = not yet covered,
grey = covered by a selected object, black = selected. The greedy family
keeps a candidate queue ordered by white-neighborhood size with lazy
invalidation; tie-breaks are (larger count, white before grey, smaller id)
so every run replays exactly.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .metrics import Dataset, Metric, as_dataset, get_metric
from .mtree import AccessCounter, MTree

WHITE, GREY, BLACK, RED = 0, 1, 2, 3

_GREEDY_VARIANTS = ("grey", "white", "lazy_grey", "lazy_white")


class Coloring:
    """Per-object solver state: color, white-neighbor count, closest selected."""

    def __init__(self, n: int):
        self.colors = np.full(n, WHITE, dtype=np.uint8)
        self.white_count = np.zeros(n, dtype=np.int64)
        self.closest_black = np.full(n, np.inf)
        self.n_white = n


@dataclass
class DiverseSubset:
    """An ordered selection of object ids computed for one radius."""

    radius: float
    ids: list
    algorithm: str
    access_cost: int = 0
    wall_time_s: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ids)

    def id_set(self) -> set:
        return set(self.ids)

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "algorithm": self.algorithm,
            "size": len(self.ids),
            "ids": [int(i) for i in self.ids],
            "access_cost": int(self.access_cost),
            "wall_time_s": self.wall_time_s,
            "metadata": self.metadata,
        }


class CandidateQueue:
    """Heap keyed by (count, white-first, id) with lazy invalidation.

    Entries go stale when an object's color or count changes; push a fresh
    entry on every change and validate at pop time.
    """

    def __init__(self, ids: np.ndarray, maximize: bool = True):
        self._ids = ids
        self._sign = -1 if maximize else 1
        self._heap: list = []

    def push(self, index: int, count: int, color: int):
        heapq.heappush(self._heap,
                       (self._sign * int(count), int(color != WHITE),
                        int(self._ids[index]), int(index), int(count), int(color)))

    def pop(self, coloring: Coloring, allowed: tuple, counts: np.ndarray) -> "int | None":
        while self._heap:
            _, _, _, index, count, color = heapq.heappop(self._heap)
            if coloring.colors[index] != color:
                continue
            if counts[index] != count:
                continue
            if color not in allowed:
                continue
            return index
        return None


class _Run:
    """Shared per-solver-run state: coloring, counters, query plumbing."""

    def __init__(self, tree: MTree, r: float, pruned: bool,
                 target_mask: "np.ndarray | None" = None):
        self.tree = tree
        self.r = float(r)
        self.pruned = pruned
        self.coloring = Coloring(tree.n)
        self.counter = AccessCounter()
        tree.reset_colors(target_mask)

    def query(self, index: int, radius: "float | None" = None, mode: str = "top_down",
              stop_at_grey_ancestor: bool = False) -> list:
        return self.tree.range_query(
            index, self.r if radius is None else radius, mode=mode,
            prune_grey=self.pruned, counter=self.counter,
            stop_at_grey_ancestor=stop_at_grey_ancestor)

    def make_grey(self, index: int):
        self.coloring.colors[index] = GREY
        self.coloring.n_white -= 1
        self.tree.note_not_target(index)

    def make_black(self, index: int):
        was_white = self.coloring.colors[index] == WHITE
        self.coloring.colors[index] = BLACK
        self.coloring.closest_black[index] = 0.0
        self.tree.set_closest_black(index, 0.0)
        if was_white:
            self.coloring.n_white -= 1
            self.tree.note_not_target(index)
        return was_white

    def finish(self, algorithm: str, selected: list, started: float,
               radius: "float | None" = None, metadata: "dict | None" = None) -> DiverseSubset:
        ids = [int(self.tree.ids[i]) for i in selected]
        return DiverseSubset(
            radius=self.r if radius is None else radius,
            ids=ids, algorithm=algorithm,
            access_cost=self.counter.node_accesses,
            wall_time_s=time.perf_counter() - started,
            metadata=metadata or {},
        )


def _initial_counts(run: _Run, init: str, radius: "float | None" = None) -> np.ndarray:
    """Exact |neighborhood| per object; strategies differ only in access cost."""
    tree = run.tree
    r = run.r if radius is None else radius
    if init == "build":
        if tree.initial_counts is None or tree.config.build_radius != r:
            raise ValueError("tree was not built with neighborhood counting at this radius")
        return tree.initial_counts.copy()
    if init == "scan":
        return tree.metric.neighbor_counts(tree.coords, r)
    if init == "query":
        counts = np.zeros(tree.n, dtype=np.int64)
        for i in range(tree.n):
            counts[i] = len(run.query(i, radius=r)) - 1
        return counts
    raise ValueError(f"unknown count init strategy {init!r}")


def basic_disc(tree: MTree, r: float, pruned: bool = True) -> DiverseSubset:
    """Select objects in leaf order; each selection covers its neighborhood."""
    started = time.perf_counter()
    run = _Run(tree, r, pruned)
    colors = run.coloring.colors
    selected: list = []
    for entry in tree.leaf_iterator():
        i = entry.index
        if colors[i] != WHITE:
            continue
        run.make_black(i)
        selected.append(i)
        for j in run.query(i):
            if j != i and colors[j] == WHITE:
                run.make_grey(j)
    return run.finish("basic_disc", selected, started)


def greedy_disc(tree: MTree, r: float, variant: str = "grey", pruned: bool = True,
                init: str = "query") -> DiverseSubset:
    """Repeatedly select the white object covering the most uncovered objects.

    variant picks the count-maintenance strategy: "grey" re-queries every
    newly covered neighbor at r; "white" runs one 2r query around the
    selection and adjusts affected white objects directly; the lazy twins
    shrink those radii to r/2 and 3r/2, trading exact counts for fewer
    accesses (selections are still validated, so results stay valid).
    """
    if variant not in _GREEDY_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    started = time.perf_counter()
    run = _Run(tree, r, pruned)
    col = run.coloring
    counts = _initial_counts(run, init)
    col.white_count = counts
    queue = CandidateQueue(tree.ids)
    for i in range(tree.n):
        queue.push(i, counts[i], WHITE)
    selected: list = []
    update_radius = {"grey": r, "lazy_grey": r / 2.0,
                     "white": 2.0 * r, "lazy_white": 1.5 * r}[variant]
    per_grey = variant in ("grey", "lazy_grey")
    while col.n_white > 0:
        p = queue.pop(col, (WHITE,), counts)
        assert p is not None, "every white object keeps a fresh queue entry"
        run.make_black(p)
        selected.append(p)
        newly = [j for j in run.query(p) if j != p and col.colors[j] == WHITE]
        for j in newly:
            run.make_grey(j)
        if not newly:
            continue
        if per_grey:
            for j in newly:
                for x in run.query(j, radius=update_radius):
                    if x == j:
                        continue
                    counts[x] -= 1
                    if col.colors[x] == WHITE:
                        queue.push(x, counts[x], WHITE)
        else:
            grey_mat = tree.coords[np.asarray(newly, dtype=np.int64)]
            for x in run.query(p, radius=update_radius):
                if col.colors[x] != WHITE:
                    continue
                hits = int((tree.metric.dists_to(grey_mat, tree.coords[x]) <= r).sum())
                if hits:
                    counts[x] -= hits
                    queue.push(x, counts[x], WHITE)
    return run.finish(f"greedy_disc[{variant}]", selected, started)


def _covering_greedy(tree: MTree, r: float, algorithm: str, pruned: bool,
                     init: str, bottom_up_truncated: bool) -> DiverseSubset:
    """Greedy cover allowing grey selections (independence not guaranteed)."""
    started = time.perf_counter()
    run = _Run(tree, r, pruned)
    col = run.coloring
    mode = "bottom_up" if bottom_up_truncated else "top_down"

    def query(i):
        return run.query(i, mode=mode, stop_at_grey_ancestor=bottom_up_truncated)

    counts = _initial_counts(run, init)
    col.white_count = counts
    queue = CandidateQueue(tree.ids)
    for i in range(tree.n):
        queue.push(i, counts[i], WHITE)
    selected: list = []
    while col.n_white > 0:
        p = queue.pop(col, (WHITE, GREY), counts)
        assert p is not None, "white objects keep fresh queue entries"
        if bottom_up_truncated and col.colors[p] == GREY and tree.leaf_of(p).grey:
            continue  # drained region: update queries stopped reaching it
        res = query(p)
        actual = sum(1 for j in res if j != p and col.colors[j] == WHITE)
        if actual != counts[p]:
            # truncated queries leave counts stale; re-rank instead of selecting
            counts[p] = actual
            if col.colors[p] == WHITE or actual > 0:
                queue.push(p, actual, int(col.colors[p]))
            continue
        was_white = run.make_black(p)
        selected.append(p)
        newly = [j for j in res if j != p and col.colors[j] == WHITE]
        for j in newly:
            run.make_grey(j)
            queue.push(j, counts[j], GREY)
        departed = list(newly)
        if was_white:
            departed.append(p)
        for j in departed:
            neighbors = res if j == p else query(j)
            for x in neighbors:
                if x == j:
                    continue
                counts[x] -= 1
                if col.colors[x] in (WHITE, GREY):
                    queue.push(x, counts[x], int(col.colors[x]))
    return run.finish(algorithm, selected, started)


def greedy_c(tree: MTree, r: float, init: str = "query") -> DiverseSubset:
    """Coverage-only greedy: both white and grey objects are candidates.

    Grey candidates need exact counts, so subtree pruning stays off.
    """
    return _covering_greedy(tree, r, "greedy_c", pruned=False, init=init,
                            bottom_up_truncated=False)


def fast_c(tree: MTree, r: float, init: str = "query") -> DiverseSubset:
    """Cheaper coverage-only greedy: bottom-up queries that stop at grey ancestors.

    Neighbors in distant leaves can be missed, so counts drift and results
    may grow, but every selection still covers what it reports covering.
    """
    return _covering_greedy(tree, r, "fast_c", pruned=True, init=init,
                            bottom_up_truncated=True)


def verify(points: "Dataset | Sequence", subset: "DiverseSubset | Iterable", r: float,
           metric: "str | Metric | None" = None) -> dict:
    """Index-free check of the two subset conditions by brute force.

    coverage: every object has a selected object within r (or is selected);
    independence: all selected pairs lie strictly more than r apart.
    """
    ds = as_dataset(points)
    m = get_metric(metric) if metric is not None else ds.default_metric()
    ids = list(subset.ids) if isinstance(subset, DiverseSubset) else list(subset)
    idx = ds.indices_for(ids)
    if len(idx) == 0:
        return {"coverage": len(ds) == 0, "independence": True}
    sel = ds.coords[idx]
    coverage = bool((m.min_dist_to_set(ds.coords, sel) <= r).all())
    within = kernels.count_within(sel, sel, float(r), m.code)
    independence = bool((within <= 1).all())  # each member only sees itself
    return {"coverage": coverage, "independence": independence}
