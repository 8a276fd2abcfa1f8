"""Balanced metric-tree index over a dataset.

Internal entries route by (pivot, covering radius); leaf entries hold the
indexed objects. All leaves sit at the same depth and are chained left to
right so solvers can stream objects in leaf order. Nodes can be marked
grey ("nothing left to reach in this subtree"), letting range queries skip
whole subtrees; an access counter models the I/O cost of every query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .metrics import Dataset, Metric, as_dataset, get_metric

MIN_NODE_CAPACITY = 4


@dataclass(frozen=True)
class SplitPolicy:
    """How an overflowed node promotes new pivots and partitions entries."""

    promote: str = "min_overlap"  # min_overlap | max_distance | random
    partition: str = "closest_pivot"  # closest_pivot | balanced

    def __post_init__(self):
        if self.promote not in ("min_overlap", "max_distance", "random"):
            raise ValueError(f"unknown promote policy {self.promote!r}")
        if self.partition not in ("closest_pivot", "balanced"):
            raise ValueError(f"unknown partition policy {self.partition!r}")


MIN_OVERLAP = SplitPolicy("min_overlap", "closest_pivot")


@dataclass(frozen=True)
class MTreeConfig:
    node_capacity: int = 50
    split_policy: SplitPolicy = MIN_OVERLAP
    count_neighborhoods_at_build: bool = False
    build_radius: float = 0.0
    seed: int = 0  # drives the random promote policy only

    def __post_init__(self):
        if self.node_capacity < MIN_NODE_CAPACITY:
            raise ValueError(f"node capacity must be >= {MIN_NODE_CAPACITY}")
        if self.count_neighborhoods_at_build and not self.build_radius > 0:
            raise ValueError("counting neighborhoods at build requires build_radius > 0")


class AccessCounter:
    """Counts node visits; one increment per node touched per query."""

    __slots__ = ("node_accesses",)

    def __init__(self):
        self.node_accesses = 0

    def visit(self, k: int = 1):
        self.node_accesses += k


class LeafEntry:
    __slots__ = ("index", "dist_to_parent", "closest_black_dist")

    def __init__(self, index: int, dist_to_parent: float):
        self.index = index
        self.dist_to_parent = dist_to_parent
        self.closest_black_dist = np.inf


class RoutingEntry:
    __slots__ = ("pivot_index", "radius", "dist_to_parent", "child")

    def __init__(self, pivot_index: int, radius: float, dist_to_parent: float, child: "_Node"):
        self.pivot_index = pivot_index
        self.radius = radius
        self.dist_to_parent = dist_to_parent
        self.child = child


class _Node:
    __slots__ = ("is_leaf", "entries", "parent", "parent_entry", "grey",
                 "targets_remaining", "next_leaf", "prev_leaf", "_keys", "_mat")

    def __init__(self, is_leaf: bool):
        self.is_leaf = is_leaf
        self.entries: list = []
        self.parent: "_Node | None" = None
        self.parent_entry: "RoutingEntry | None" = None
        self.grey = False
        self.targets_remaining = 0
        self.next_leaf: "_Node | None" = None
        self.prev_leaf: "_Node | None" = None
        self._keys: "np.ndarray | None" = None
        self._mat: "np.ndarray | None" = None

    def key_of(self, entry) -> int:
        return entry.index if self.is_leaf else entry.pivot_index

    def invalidate(self):
        self._keys = None
        self._mat = None

    def keys_matrix(self, coords: np.ndarray):
        if self._keys is None:
            self._keys = np.fromiter((self.key_of(e) for e in self.entries),
                                     dtype=np.int64, count=len(self.entries))
            self._mat = np.ascontiguousarray(coords[self._keys])
        return self._keys, self._mat


class MTree:
    """Use :func:`build` to construct; mutation is internal to construction."""

    def __init__(self, ds: Dataset, metric: Metric, config: MTreeConfig):
        self.ds = ds
        self.metric = metric
        self.config = config
        self.root = _Node(is_leaf=True)
        self.first_leaf = self.root
        self.height = 1
        self.node_count = 1
        self.build_accesses = 0
        self.initial_counts: "np.ndarray | None" = None
        self._rng = np.random.default_rng(config.seed)
        self._leaf_of: "list[_Node | None]" = [None] * len(ds)
        self._entry_of: "list[LeafEntry | None]" = [None] * len(ds)

    # -- convenience -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.ds)

    @property
    def coords(self) -> np.ndarray:
        return self.ds.coords

    @property
    def ids(self) -> np.ndarray:
        return self.ds.ids

    def leaf_of(self, index: int) -> _Node:
        return self._leaf_of[index]

    def entry_of(self, index: int) -> LeafEntry:
        return self._entry_of[index]

    def closest_black(self, index: int) -> float:
        return self._entry_of[index].closest_black_dist

    def set_closest_black(self, index: int, value: float):
        self._entry_of[index].closest_black_dist = value

    # -- construction ------------------------------------------------------

    def _insert(self, index: int):
        q = self.coords[index]
        node = self.root
        self.build_accesses += 1
        while not node.is_leaf:
            _, mat = node.keys_matrix(self.coords)
            dists = self.metric.dists_to(mat, q)
            best = None  # (needs_enlarge, cost, dist, order)
            for i, entry in enumerate(node.entries):
                d = dists[i]
                if d <= entry.radius:
                    cand = (0, d, d, i)
                else:
                    cand = (1, d - entry.radius, d, i)
                if best is None or cand < best:
                    best = cand
            entry = node.entries[best[3]]
            if best[0]:
                entry.radius = best[2]
            node = entry.child
            self.build_accesses += 1
        pivot = node.parent_entry.pivot_index if node.parent_entry else None
        dp = 0.0 if pivot is None else float(self.metric.dists_to(
            self.coords[pivot][None, :], q)[0])
        entry = LeafEntry(index, dp)
        node.entries.append(entry)
        node.invalidate()
        self._leaf_of[index] = node
        self._entry_of[index] = entry
        if len(node.entries) > self.config.node_capacity:
            self._split(node)

    def _promote(self, node: _Node, keys: np.ndarray, mat: np.ndarray) -> "tuple[int, int]":
        policy = self.config.split_policy.promote
        if policy == "random":
            i, j = self._rng.choice(len(keys), size=2, replace=False)
            return int(keys[i]), int(keys[j])
        if policy == "min_overlap" and node.parent_entry is not None:
            p1 = node.parent_entry.pivot_index
            d = self.metric.dists_to(mat, self.coords[p1])
            return p1, int(keys[int(np.argmax(d))])
        # max_distance, and the root fallback for min_overlap
        from . import kernels
        i, j, _ = kernels.farthest_pair(mat, self.metric.code)
        return int(keys[i]), int(keys[j])

    def _partition(self, node: _Node, p1: int, p2: int):
        _, mat = node.keys_matrix(self.coords)
        d1 = self.metric.dists_to(mat, self.coords[p1])
        d2 = self.metric.dists_to(mat, self.coords[p2])
        n_entries = len(node.entries)
        if self.config.split_policy.partition == "balanced":
            side = np.zeros(n_entries, dtype=np.int8)
            unassigned = set(range(n_entries))
            turn = 0
            order1 = list(np.argsort(d1, kind="stable"))
            order2 = list(np.argsort(d2, kind="stable"))
            pos1 = pos2 = 0
            while unassigned:
                if turn == 0:
                    while order1[pos1] not in unassigned:
                        pos1 += 1
                    side[order1[pos1]] = 0
                    unassigned.remove(order1[pos1])
                else:
                    while order2[pos2] not in unassigned:
                        pos2 += 1
                    side[order2[pos2]] = 1
                    unassigned.remove(order2[pos2])
                turn ^= 1
        else:
            side = (d1 > d2).astype(np.int8)
            # keep each promoted pivot's own entry on its side; guard emptiness
            for i, e in enumerate(node.entries):
                if node.key_of(e) == p1:
                    side[i] = 0
                elif node.key_of(e) == p2:
                    side[i] = 1
            if side.all():
                side[int(np.argmin(d1))] = 0
            elif not side.any():
                side[int(np.argmax(d2))] = 1
        g1 = [node.entries[i] for i in range(n_entries) if side[i] == 0]
        g2 = [node.entries[i] for i in range(n_entries) if side[i] == 1]
        return g1, g2, d1, d2, side

    def _child_radius(self, pivot: int, node_is_leaf: bool, entries, dists) -> float:
        if node_is_leaf:
            return float(dists.max()) if len(dists) else 0.0
        return float(max(d + e.radius for d, e in zip(dists, entries)))

    def _make_node(self, is_leaf: bool, entries, pivot: int, dists) -> "tuple[_Node, float]":
        node = _Node(is_leaf)
        node.entries = entries
        node.invalidate()
        for e, d in zip(entries, dists):
            e.dist_to_parent = float(d)
            if is_leaf:
                self._leaf_of[e.index] = node
                self._entry_of[e.index] = e
            else:
                e.child.parent = node
                e.child.parent_entry = e
        radius = self._child_radius(pivot, is_leaf, entries, dists)
        return node, radius

    def _split(self, node: _Node):
        keys, mat = node.keys_matrix(self.coords)
        p1, p2 = self._promote(node, keys, mat)
        g1, g2, d1, d2, side = self._partition(node, p1, p2)
        n1, rad1 = self._make_node(node.is_leaf, g1, p1, d1[side == 0])
        n2, rad2 = self._make_node(node.is_leaf, g2, p2, d2[side == 1])
        if node.is_leaf:
            n1.prev_leaf = node.prev_leaf
            n1.next_leaf = n2
            n2.prev_leaf = n1
            n2.next_leaf = node.next_leaf
            if node.prev_leaf is not None:
                node.prev_leaf.next_leaf = n1
            if node.next_leaf is not None:
                node.next_leaf.prev_leaf = n2
            if self.first_leaf is node:
                self.first_leaf = n1
        self.node_count += 1

        parent = node.parent
        if parent is None:
            new_root = _Node(is_leaf=False)
            e1 = RoutingEntry(p1, rad1, 0.0, n1)
            e2 = RoutingEntry(p2, rad2, 0.0, n2)
            new_root.entries = [e1, e2]
            new_root.invalidate()
            n1.parent = n2.parent = new_root
            n1.parent_entry, n2.parent_entry = e1, e2
            self.root = new_root
            self.height += 1
            self.node_count += 1
            return
        gp_pivot = parent.parent_entry.pivot_index if parent.parent_entry else None
        if gp_pivot is None:
            dp1 = dp2 = 0.0
        else:
            gq = self.coords[gp_pivot]
            dp1 = float(self.metric.dists_to(self.coords[p1][None, :], gq)[0])
            dp2 = float(self.metric.dists_to(self.coords[p2][None, :], gq)[0])
        e1 = RoutingEntry(p1, rad1, dp1, n1)
        e2 = RoutingEntry(p2, rad2, dp2, n2)
        n1.parent = n2.parent = parent
        n1.parent_entry, n2.parent_entry = e1, e2
        pos = parent.entries.index(node.parent_entry)
        parent.entries[pos] = e1
        parent.entries.append(e2)
        parent.invalidate()
        if len(parent.entries) > self.config.node_capacity:
            self._split(parent)

    # -- queries -----------------------------------------------------------

    def _scan_leaf(self, leaf: _Node, q: np.ndarray, r: float, out: list):
        keys, mat = leaf.keys_matrix(self.coords)
        d = self.metric.dists_to(mat, q)
        hit = keys[d <= r]
        if hit.size:
            out.extend(int(i) for i in hit)

    def _descend(self, node: _Node, q: np.ndarray, r: float, prune_grey: bool,
                 counter: AccessCounter, out: list):
        stack = [node]
        while stack:
            cur = stack.pop()
            counter.visit()
            if cur.is_leaf:
                self._scan_leaf(cur, q, r, out)
                continue
            keys, mat = cur.keys_matrix(self.coords)
            d = self.metric.dists_to(mat, q)
            for i, entry in enumerate(cur.entries):
                child = entry.child
                if prune_grey and child.grey:
                    continue
                if d[i] <= r + entry.radius:
                    stack.append(child)

    def range_query(self, center, r: float, mode: str = "top_down",
                    prune_grey: bool = False, counter: "AccessCounter | None" = None,
                    stop_at_grey_ancestor: bool = False) -> "list[int]":
        """Indices of objects within distance r of the center.

        The center is a coordinate vector or the index of an indexed object;
        bottom_up mode requires an index. Results include the center object
        itself when indexed.
        """
        if counter is None:
            counter = AccessCounter()
        center_index = None
        if isinstance(center, (int, np.integer)):
            center_index = int(center)
            q = self.coords[center_index]
        else:
            q = np.asarray(center, dtype=np.float64)
        out: list = []
        if mode == "top_down":
            if not (prune_grey and self.root.grey):
                self._descend(self.root, q, r, prune_grey, counter, out)
            return out
        if mode != "bottom_up":
            raise ValueError(f"unknown query mode {mode!r}")
        if center_index is None:
            raise ValueError("bottom_up queries need an indexed object as center")
        leaf = self._leaf_of[center_index]
        if not (prune_grey and leaf.grey):
            counter.visit()
            self._scan_leaf(leaf, q, r, out)
        node = leaf
        while node.parent is not None:
            parent = node.parent
            if stop_at_grey_ancestor and parent.grey:
                break
            counter.visit()
            keys, mat = parent.keys_matrix(self.coords)
            d = self.metric.dists_to(mat, q)
            for i, entry in enumerate(parent.entries):
                child = entry.child
                if child is node:
                    continue
                if prune_grey and child.grey:
                    continue
                if d[i] <= r + entry.radius:
                    self._descend(child, q, r, prune_grey, counter, out)
            node = parent
        return out

    # -- leaf chain --------------------------------------------------------

    def leaves(self) -> Iterator[_Node]:
        leaf = self.first_leaf
        while leaf is not None:
            yield leaf
            leaf = leaf.next_leaf

    def leaf_iterator(self) -> Iterator[LeafEntry]:
        """Every indexed object exactly once, in left-to-right leaf order."""
        for leaf in self.leaves():
            yield from leaf.entries

    # -- grey marking ------------------------------------------------------

    def reset_colors(self, target_mask: "np.ndarray | None" = None):
        """Clear grey marks and set per-leaf counters of still-reachable objects.

        target_mask marks the objects queries must keep reaching (default all);
        leaves holding none are greyed immediately.
        """
        self._clear_grey(self.root)
        empty = []
        for leaf in self.leaves():
            if target_mask is None:
                leaf.targets_remaining = len(leaf.entries)
            else:
                leaf.targets_remaining = int(sum(
                    1 for e in leaf.entries if target_mask[e.index]))
            if leaf.targets_remaining == 0:
                empty.append(leaf)
        for leaf in empty:
            self.color_grey_upward(leaf)

    def _clear_grey(self, node: _Node):
        node.grey = False
        if not node.is_leaf:
            for e in node.entries:
                self._clear_grey(e.child)

    def note_not_target(self, index: int):
        leaf = self._leaf_of[index]
        leaf.targets_remaining -= 1
        if leaf.targets_remaining == 0:
            self.color_grey_upward(leaf)

    def color_grey_upward(self, leaf: _Node):
        """Grey a drained leaf and every ancestor whose children are all grey."""
        if leaf.targets_remaining != 0:
            raise ValueError("leaf still holds reachable objects")
        leaf.grey = True
        node = leaf.parent
        while node is not None and not node.grey:
            if all(e.child.grey for e in node.entries):
                node.grey = True
                node = node.parent
            else:
                break

    # -- quality -----------------------------------------------------------

    def point_query_accesses(self, index: int) -> int:
        counter = AccessCounter()
        self.range_query(self.coords[index], 0.0, counter=counter)
        return counter.node_accesses

    def fat_factor(self) -> float:
        """Overlap measure in [0, 1]; 0 means point queries touch one node per level."""
        m, h, n = self.node_count, self.height, self.n
        if m == h:
            return 0.0
        z = sum(self.point_query_accesses(i) for i in range(n))
        return (z - n * h) / n / (m - h)

    def stats(self, with_fat_factor: bool = True) -> dict:
        levels: "list[dict]" = []

        def walk(node: _Node, depth: int):
            while len(levels) <= depth:
                levels.append({"level": len(levels), "nodes": 0, "entries": 0})
            levels[depth]["nodes"] += 1
            levels[depth]["entries"] += len(node.entries)
            if not node.is_leaf:
                for e in node.entries:
                    walk(e.child, depth + 1)

        walk(self.root, 0)
        for row in levels:
            row["mean_fill"] = row["entries"] / (row["nodes"] * self.config.node_capacity)
        out = {
            "n": self.n,
            "height": self.height,
            "node_count": self.node_count,
            "node_capacity": self.config.node_capacity,
            "levels": levels,
        }
        if with_fat_factor:
            out["fat_factor"] = self.fat_factor()
        return out


def build(points: "Dataset | Sequence", config: "MTreeConfig | None" = None,
          metric: "str | Metric | None" = None) -> MTree:
    """Index a dataset; optionally pre-count each object's neighborhood size.

    With count_neighborhoods_at_build set, every insert runs one range query
    at build_radius and accumulates exact neighborhood sizes incrementally,
    leaving `tree.initial_counts` ready for the greedy solvers.
    """
    ds = as_dataset(points)
    config = config or MTreeConfig()
    m = get_metric(metric) if metric is not None else ds.default_metric()
    if m.kind != ds.kind:
        raise ValueError(f"{m.name} metric is not defined for {ds.kind} points")
    tree = MTree(ds, m, config)
    counting = config.count_neighborhoods_at_build
    if counting:
        tree.initial_counts = np.zeros(len(ds), dtype=np.int64)
    counter = AccessCounter()
    for i in range(len(ds)):
        tree._insert(i)
        if counting:
            res = tree.range_query(i, config.build_radius, counter=counter)
            tree.initial_counts[i] = len(res) - 1
            for j in res:
                if j != i:
                    tree.initial_counts[j] += 1
    tree.build_accesses += counter.node_accesses
    return tree
