"""Adapting a diverse subset to a new radius without recomputing from scratch.

Shrinking the radius keeps every selected object and promotes objects that
fall out of coverage. Growing it keeps as many selected objects as possible:
a first pass re-selects among the old members (now "red"), evicting members
covered by a kept one, and a second pass covers anything left exposed.
"""

from __future__ import annotations

import time
from typing import Iterable

import numpy as np

from .disc import (BLACK, GREY, RED, WHITE, CandidateQueue, DiverseSubset, _Run)
from .mtree import MTree

ZOOM_OUT_VARIANTS = ("plain", "greedy_a", "greedy_b", "greedy_c")


def _subset_indices(tree: MTree, subset) -> np.ndarray:
    ids = subset.ids if isinstance(subset, DiverseSubset) else list(subset)
    return tree.ds.indices_for(ids)


def _maintain_by_indices(tree: MTree, idx: np.ndarray) -> np.ndarray:
    if len(idx) == 0:
        cb = np.full(tree.n, np.inf)
    else:
        cb = tree.metric.min_dist_to_set(tree.coords, tree.coords[idx])
    for i in range(tree.n):
        tree.set_closest_black(i, float(cb[i]))
    return cb


def maintain_closest_black(tree: MTree, subset) -> np.ndarray:
    """Refresh every leaf entry's distance to its closest selected object.

    Selected objects get 0 (they cover themselves); the sentinel is +inf
    when the subset is empty. Returns the distances indexed by object.
    """
    return _maintain_by_indices(tree, _subset_indices(tree, subset))


def zoom_diff(base_ids: Iterable, new_ids: Iterable) -> dict:
    base = list(base_ids)
    new = list(new_ids)
    base_set, new_set = set(base), set(new)
    return {
        "kept": [i for i in new if i in base_set],
        "added": [i for i in new if i not in base_set],
        "removed": [i for i in base if i not in new_set],
    }


def _cb_update(run: _Run, p: int, res: list) -> np.ndarray:
    """After selecting p, lower closest-selected distances of reached objects."""
    tree = run.tree
    cb = run.coloring.closest_black
    arr = np.fromiter((j for j in res), dtype=np.int64, count=len(res))
    d = tree.metric.dists_to(tree.coords[arr], tree.coords[p])
    for j, dj in zip(arr, d):
        if dj < cb[j]:
            cb[j] = float(dj)
            tree.set_closest_black(int(j), float(dj))
    return d


def zoom_in(tree: MTree, base: DiverseSubset, r: float, r_new: float,
            greedy: bool = False) -> DiverseSubset:
    """Adapt to a smaller radius; the result always contains the base.

    Objects whose closest selected object drifted beyond r_new become
    candidates again; plain mode promotes them in leaf order, greedy mode
    by largest white neighborhood at r_new.
    """
    if not 0 < r_new < r:
        raise ValueError("zooming in requires 0 < r_new < r")
    started = time.perf_counter()
    base_idx = _subset_indices(tree, base)
    cb = _maintain_by_indices(tree, base_idx)
    black = np.zeros(tree.n, dtype=bool)
    black[base_idx] = True
    uncovered = (~black) & (cb > r_new)

    run = _Run(tree, r_new, pruned=True, target_mask=uncovered)
    col = run.coloring
    col.colors[:] = GREY
    col.colors[black] = BLACK
    col.colors[uncovered] = WHITE
    col.n_white = int(uncovered.sum())
    col.closest_black = cb

    added: list = []

    def select(p: int):
        col.colors[p] = BLACK
        col.n_white -= 1
        tree.note_not_target(p)
        cb[p] = 0.0
        tree.set_closest_black(p, 0.0)
        added.append(p)
        res = [j for j in run.query(p) if j != p]
        _cb_update(run, p, res)
        newly = [j for j in res if col.colors[j] == WHITE]
        for j in newly:
            run.make_grey(j)
        return newly

    if not greedy:
        for entry in tree.leaf_iterator():
            if col.colors[entry.index] == WHITE:
                select(entry.index)
    else:
        counts = np.zeros(tree.n, dtype=np.int64)
        whites = np.flatnonzero(uncovered)
        for w in whites:
            counts[w] = sum(1 for x in run.query(int(w))
                            if x != w and col.colors[x] == WHITE)
        col.white_count = counts
        queue = CandidateQueue(tree.ids)
        for w in whites:
            queue.push(int(w), counts[w], WHITE)
        while col.n_white > 0:
            p = queue.pop(col, (WHITE,), counts)
            assert p is not None
            newly = select(p)
            for j in newly:
                for x in run.query(j):
                    if x != j:
                        counts[x] -= 1
                        if col.colors[x] == WHITE:
                            queue.push(x, counts[x], WHITE)

    selection = list(base_idx) + added
    _maintain_by_indices(tree, np.asarray(selection, dtype=np.int64))
    algorithm = "greedy_zoom_in" if greedy else "zoom_in"
    meta = {"added": [int(tree.ids[i]) for i in added], "base_size": len(base_idx)}
    return run.finish(algorithm, selection, started, metadata=meta)


def zoom_out(tree: MTree, base: DiverseSubset, r: float, r_new: float,
             variant: str = "plain") -> DiverseSubset:
    """Adapt to a larger radius in two passes over the recolored state.

    Pass 1 re-selects among former members (red): plain takes them in leaf
    order, greedy_a prefers many red neighbors, greedy_b few red neighbors,
    greedy_c many white neighbors. Each selection covers its r_new
    neighborhood and evicts the red members inside it. Pass 2 greedily
    covers whatever white objects remain.
    """
    if variant not in ZOOM_OUT_VARIANTS:
        raise ValueError(f"unknown zoom-out variant {variant!r}")
    if not r_new > r:
        raise ValueError("zooming out requires r_new > r")
    started = time.perf_counter()
    base_idx = _subset_indices(tree, base)

    run = _Run(tree, r_new, pruned=True)  # whites and reds both stay reachable
    col = run.coloring
    col.colors[base_idx] = RED
    col.n_white = tree.n - len(base_idx)
    n_red = len(base_idx)
    counts = col.white_count
    evictions: dict = {}
    survivors: list = []
    added: list = []

    def select_red(p: int) -> "tuple[list, list]":
        nonlocal n_red
        col.colors[p] = BLACK
        n_red -= 1
        tree.note_not_target(p)
        col.closest_black[p] = 0.0
        tree.set_closest_black(p, 0.0)
        survivors.append(p)
        res = [j for j in run.query(p) if j != p]
        _cb_update(run, p, res)
        evicted = [j for j in res if col.colors[j] == RED]
        for j in evicted:
            col.colors[j] = GREY
            n_red -= 1
            tree.note_not_target(j)
        newly_grey = [j for j in res if col.colors[j] == WHITE]
        for j in newly_grey:
            run.make_grey(j)
        evictions[int(tree.ids[p])] = [int(tree.ids[j]) for j in evicted]
        return [p] + evicted, newly_grey

    if variant == "plain":
        for entry in tree.leaf_iterator():
            if col.colors[entry.index] == RED:
                select_red(entry.index)
    else:
        count_reds = variant in ("greedy_a", "greedy_b")
        for i in base_idx:
            res = run.query(int(i))
            if count_reds:
                counts[i] = sum(1 for x in res if x != i and col.colors[x] == RED)
            else:
                counts[i] = sum(1 for x in res if x != i and col.colors[x] == WHITE)
        queue = CandidateQueue(tree.ids, maximize=(variant != "greedy_b"))
        for i in base_idx:
            queue.push(int(i), counts[i], RED)
        while n_red > 0:
            p = queue.pop(col, (RED,), counts)
            assert p is not None
            departed, newly_grey = select_red(p)
            if count_reds:
                # departed reds vanish from their red neighbors' counts
                for x in departed:
                    for y in run.query(x):
                        if y != x and col.colors[y] == RED:
                            counts[y] -= 1
                            queue.push(y, counts[y], RED)
            else:
                # greyed whites vanish from their red neighbors' counts
                for w in newly_grey:
                    for y in run.query(w):
                        if y != w and col.colors[y] == RED:
                            counts[y] -= 1
                            queue.push(y, counts[y], RED)

    # pass 2: cover anything the surviving members no longer reach
    if col.n_white > 0:
        queue = CandidateQueue(tree.ids)
        whites = np.flatnonzero(col.colors == WHITE)
        for w in whites:
            counts[w] = sum(1 for x in run.query(int(w))
                            if x != w and col.colors[x] == WHITE)
            queue.push(int(w), counts[w], WHITE)
        while col.n_white > 0:
            p = queue.pop(col, (WHITE,), counts)
            assert p is not None
            col.colors[p] = BLACK
            col.n_white -= 1
            tree.note_not_target(p)
            col.closest_black[p] = 0.0
            tree.set_closest_black(p, 0.0)
            added.append(p)
            res = [j for j in run.query(p) if j != p]
            _cb_update(run, p, res)
            newly = [j for j in res if col.colors[j] == WHITE]
            for j in newly:
                run.make_grey(j)
            for j in newly:
                for x in run.query(j):
                    if x != j:
                        counts[x] -= 1
                        if col.colors[x] == WHITE:
                            queue.push(x, counts[x], WHITE)

    selection = survivors + added
    _maintain_by_indices(tree, np.asarray(selection, dtype=np.int64))
    meta = {
        "survivors": [int(tree.ids[i]) for i in survivors],
        "added": [int(tree.ids[i]) for i in added],
        "evictions": evictions,
        "base_size": len(base_idx),
    }
    return run.finish(f"zoom_out[{variant}]", selection, started, metadata=meta)


def local_zoom(tree: MTree, base: DiverseSubset, r: float, focus_id: int,
               r_new: float, greedy: bool = False,
               out_variant: str = "plain") -> DiverseSubset:
    """Re-diversify only the neighborhood of one selected object.

    The zoom runs on the focus object's r-neighborhood as its own dataset
    (the focus is the only base member inside: other members sit more than
    r away). Members outside that neighborhood are carried over untouched;
    pairs that end up closer than r_new across the boundary are reported in
    the metadata rather than repaired.
    """
    from . import mtree as mtree_mod

    base_ids = list(base.ids)
    if focus_id not in base_ids:
        raise ValueError(f"focus {focus_id} is not a member of the base subset")
    if r_new == r or r_new <= 0:
        raise ValueError("need a positive radius different from the base radius")
    started = time.perf_counter()
    focus_idx = tree.ds.index_of(focus_id)
    hood = sorted(set(tree.range_query(focus_idx, r)) | {focus_idx})
    sub_ds = tree.ds.__class__.from_points([tree.ds.point(i) for i in hood])
    sub_config = mtree_mod.MTreeConfig(
        node_capacity=tree.config.node_capacity,
        split_policy=tree.config.split_policy,
        seed=tree.config.seed,
    )
    sub_tree = mtree_mod.build(sub_ds, sub_config, tree.metric)
    sub_base = DiverseSubset(radius=r, ids=[focus_id], algorithm="local_base")
    if r_new < r:
        local = zoom_in(sub_tree, sub_base, r, r_new, greedy=greedy)
    else:
        local = zoom_out(sub_tree, sub_base, r, r_new, variant=out_variant)

    from .disc import verify

    local_checks = verify(sub_ds, local, r_new, tree.metric)
    hood_ids = {int(tree.ids[i]) for i in hood}
    outside = [pid for pid in base_ids if pid not in hood_ids]
    merged = outside + [pid for pid in local.ids]

    violations = []
    if outside and len(local.ids) > 0:
        out_idx = tree.ds.indices_for(outside)
        for pid in local.ids:
            d = tree.metric.dists_to(tree.coords[out_idx],
                                     tree.coords[tree.ds.index_of(pid)])
            for oid, dv in zip(outside, d):
                if dv <= r_new:
                    violations.append((int(pid), int(oid)))

    return DiverseSubset(
        radius=r_new, ids=merged, algorithm="local_" + local.algorithm,
        access_cost=local.access_cost,
        wall_time_s=time.perf_counter() - started,
        metadata={
            "focus": int(focus_id),
            "local_ids": [int(i) for i in local.ids],
            "local_verify": local_checks,
            "neighborhood_ids": sorted(hood_ids),
            "outside_ids": outside,
            "boundary_pairs_within_radius": violations,
        },
    )
