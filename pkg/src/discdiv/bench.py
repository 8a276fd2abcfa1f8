"""Seeded experiment sweeps emitting flat CSV tables.

Node accesses are the primary cost metric; wall time is recorded but never
asserted on. Every solution row is re-verified before it is written. With
identical config and seeds, every column except wall_time_ms replays
byte-identically.
"""

from __future__ import annotations

import csv
import io
from typing import Callable, Iterable

import numpy as np

from . import data as data_mod
from . import mtree
from .baselines import jaccard_distance, quality
from .disc import basic_disc, fast_c, greedy_c, greedy_disc, verify
from .metrics import get_metric
from .zoom import zoom_in, zoom_out

DEFAULT_TREE = {"node_capacity": 50, "promote": "min_overlap", "partition": "closest_pivot"}

SIZE_COLUMNS = ["seed", "dataset", "n", "d", "metric", "node_capacity", "promote",
                "partition", "algorithm", "r", "pruned", "count_init", "size",
                "access_cost", "coverage", "independence", "wall_time_ms"]

QUALITY_COLUMNS = ["f_min", "f_sum", "medoid_cost", "coverage_fraction", "jaccard",
                   "degenerate"]

ZOOM_COLUMNS = ["seed", "dataset", "n", "metric", "direction", "variant", "r_prev", "r",
                "prev_size", "adapted_size", "scratch_size", "adapted_accesses",
                "scratch_accesses", "jaccard_adapted_prev", "jaccard_scratch_prev",
                "superset_ok", "coverage", "independence", "wall_time_ms"]

TREE_COLUMNS = ["seed", "dataset", "n", "metric", "promote", "partition", "node_capacity",
                "fat_factor", "workload_r", "workload_algorithm", "workload_accesses",
                "workload_size", "build_accesses"]


def _solver(name: str, pruned: bool, count_init: str) -> "Callable":
    if name == "basic_disc":
        return lambda tree, r: basic_disc(tree, r, pruned=pruned)
    if name.startswith("greedy_disc[") and name.endswith("]"):
        variant = name[len("greedy_disc["):-1]
        return lambda tree, r: greedy_disc(tree, r, variant=variant, pruned=pruned,
                                           init=count_init)
    if name == "greedy_c":
        return lambda tree, r: greedy_c(tree, r, init=count_init)
    if name == "fast_c":
        return lambda tree, r: fast_c(tree, r, init=count_init)
    raise ValueError(f"unknown algorithm {name!r}")


INDEPENDENT_ALGORITHMS = ("basic_disc", "greedy_disc[grey]", "greedy_disc[white]",
                          "greedy_disc[lazy_grey]", "greedy_disc[lazy_white]")


def _tree_config(cfg: "dict | None") -> mtree.MTreeConfig:
    cfg = {**DEFAULT_TREE, **(cfg or {})}
    return mtree.MTreeConfig(
        node_capacity=int(cfg["node_capacity"]),
        split_policy=mtree.SplitPolicy(cfg["promote"], cfg["partition"]),
        seed=int(cfg.get("seed", 0)),
    )


def _dataset_for(config: dict, seed: int):
    spec = dict(config.get("dataset") or {"type": "clustered", "n": 10000, "d": 2})
    spec.setdefault("type", "clustered")
    spec["seed"] = seed
    return data_mod.make_dataset(spec), spec


def _check_radii(radii: Iterable) -> "list[float]":
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    return radii


def run_suite(config: dict) -> "tuple[list, list]":
    """Solution size / access cost per (seed, algorithm, radius).

    With "quality": true each row also carries the subset quality measures
    (spread, medoid cost, coverage fraction).
    """
    radii = _check_radii(config.get("radii", [0.01]))
    algorithms = config.get("algorithms", ["basic_disc", "greedy_disc[grey]"])
    seeds = [int(s) for s in config.get("seeds", [0])]
    metric = get_metric(config.get("metric", "euclidean"))
    pruned = bool(config.get("pruned", True))
    count_init = config.get("count_init", "query")
    with_quality = bool(config.get("quality", False))
    tree_cfg = _tree_config(config.get("tree"))
    unknown = set(config) - {"radii", "algorithms", "seeds", "metric", "pruned",
                             "count_init", "tree", "dataset", "quality"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    columns = SIZE_COLUMNS + (QUALITY_COLUMNS if with_quality else [])
    rows = []
    for seed in seeds:
        ds, spec = _dataset_for(config, seed)
        tree = mtree.build(ds, tree_cfg, metric)
        for name in algorithms:
            solve = _solver(name, pruned, count_init)
            for r in radii:
                sub = solve(tree, r)
                checks = verify(ds, sub, r, metric)
                if not checks["coverage"]:
                    raise AssertionError(f"{name} produced a non-covering subset")
                if name in INDEPENDENT_ALGORITHMS and not checks["independence"]:
                    raise AssertionError(f"{name} violated dissimilarity")
                row = {
                    "seed": seed, "dataset": spec["type"], "n": len(ds), "d": ds.dim,
                    "metric": metric.name, "node_capacity": tree_cfg.node_capacity,
                    "promote": tree_cfg.split_policy.promote,
                    "partition": tree_cfg.split_policy.partition,
                    "algorithm": name, "r": r, "pruned": pruned,
                    "count_init": count_init, "size": len(sub),
                    "access_cost": sub.access_cost,
                    "coverage": checks["coverage"],
                    "independence": checks["independence"],
                    "wall_time_ms": round(sub.wall_time_s * 1000, 3),
                }
                if with_quality:
                    row.update(quality(ds, sub, r, metric).to_row())
                rows.append(row)
    return columns, rows


def run_zoom_suite(config: dict) -> "tuple[list, list]":
    """Adapted-vs-from-scratch comparison along a radius ladder.

    Each rung adapts the from-scratch greedy solution of the previous rung,
    mirroring how a user would steer the radius interactively.
    """
    ladder = _check_radii(config.get("ladder", []))
    if len(ladder) < 2:
        raise ValueError("radius ladder needs at least two rungs")
    diffs = np.diff(ladder)
    if (diffs == 0).any():
        raise ValueError("consecutive ladder radii must differ")
    if not ((diffs < 0).all() or (diffs > 0).all()):
        raise ValueError("ladder must be strictly monotone")
    direction = "in" if diffs[0] < 0 else "out"
    variant = config.get("variant", "greedy" if direction == "in" else "greedy_a")
    seeds = [int(s) for s in config.get("seeds", [0])]
    metric = get_metric(config.get("metric", "euclidean"))
    count_init = config.get("count_init", "scan")
    tree_cfg = _tree_config(config.get("tree"))

    rows = []
    for seed in seeds:
        ds, spec = _dataset_for(config, seed)
        tree = mtree.build(ds, tree_cfg, metric)
        scratch = {r: greedy_disc(tree, r, init=count_init) for r in ladder}
        for r_prev, r in zip(ladder, ladder[1:]):
            prev = scratch[r_prev]
            if direction == "in":
                adapted = zoom_in(tree, prev, r_prev, r, greedy=(variant == "greedy"))
            else:
                adapted = zoom_out(tree, prev, r_prev, r, variant=variant)
            checks = verify(ds, adapted, r, metric)
            if not checks["coverage"] or not checks["independence"]:
                raise AssertionError("zoom produced an invalid subset")
            superset_ok = (direction != "in") or prev.id_set() <= adapted.id_set()
            rows.append({
                "seed": seed, "dataset": spec["type"], "n": len(ds),
                "metric": metric.name, "direction": direction, "variant": variant,
                "r_prev": r_prev, "r": r,
                "prev_size": len(prev), "adapted_size": len(adapted),
                "scratch_size": len(scratch[r]),
                "adapted_accesses": adapted.access_cost,
                "scratch_accesses": scratch[r].access_cost,
                "jaccard_adapted_prev": jaccard_distance(adapted.ids, prev.ids),
                "jaccard_scratch_prev": jaccard_distance(scratch[r].ids, prev.ids),
                "superset_ok": superset_ok,
                "coverage": checks["coverage"],
                "independence": checks["independence"],
                "wall_time_ms": round(adapted.wall_time_s * 1000, 3),
            })
    return ZOOM_COLUMNS, rows


def run_tree_suite(config: dict) -> "tuple[list, list]":
    """Fat-factor and a fixed greedy workload across split policies and capacities."""
    policies = config.get("policies") or [DEFAULT_TREE]
    capacities = [int(c) for c in config.get("capacities", [50])]
    seeds = [int(s) for s in config.get("seeds", [0])]
    metric = get_metric(config.get("metric", "euclidean"))
    workload_r = float(config.get("workload_r", 0.02))
    count_init = config.get("count_init", "query")

    rows = []
    for seed in seeds:
        ds, spec = _dataset_for(config, seed)
        for policy in policies:
            for cap in capacities:
                cfg = _tree_config({**policy, "node_capacity": cap})
                tree = mtree.build(ds, cfg, metric)
                sub = greedy_disc(tree, workload_r, init=count_init)
                rows.append({
                    "seed": seed, "dataset": spec["type"], "n": len(ds),
                    "metric": metric.name,
                    "promote": cfg.split_policy.promote,
                    "partition": cfg.split_policy.partition,
                    "node_capacity": cap,
                    "fat_factor": tree.fat_factor(),
                    "workload_r": workload_r,
                    "workload_algorithm": "greedy_disc[grey]",
                    "workload_accesses": sub.access_cost,
                    "workload_size": len(sub),
                    "build_accesses": tree.build_accesses,
                })
    return TREE_COLUMNS, rows


SUITES = {"size": run_suite, "zoom": run_zoom_suite, "tree": run_tree_suite}


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv_text(columns: list, rows: "list[dict]") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(path, columns: list, rows: "list[dict]") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv_text(columns, rows))


def aggregate_rows(rows: "list[dict]", group_by: "list[str]",
                   value_cols: "list[str]") -> "tuple[list, list]":
    """Group rows and average numeric columns: the plot-data emitter."""
    groups: dict = {}
    for row in rows:
        key = tuple(row[g] for g in group_by)
        groups.setdefault(key, []).append(row)
    columns = list(group_by) + [f"mean_{c}" for c in value_cols] + ["rows"]
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
        bucket = groups[key]
        row = dict(zip(group_by, key))
        for c in value_cols:
            row[f"mean_{c}"] = float(np.mean([float(b[c]) for b in bucket]))
        row["rows"] = len(bucket)
        out.append(row)
    return columns, out


def read_csv(path) -> "tuple[list, list]":
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [dict(zip(columns, row)) for row in reader]
    return columns, rows
