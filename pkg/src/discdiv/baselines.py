"""Comparison diversifiers (greedy MaxMin / MaxSum, k-medoids) and quality measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .metrics import as_dataset, get_metric

PAIRWISE_LIMIT = 4096  # k-medoids materializes the full distance matrix


def _prep(points, metric, k):
    ds = as_dataset(points)
    if not 1 <= k <= len(ds):
        raise ValueError(f"k must be in [1, {len(ds)}], got {k}")
    return ds, get_metric(metric)


def _tie_argbest(values: np.ndarray, candidates: np.ndarray, ids: np.ndarray,
                 maximize: bool = True) -> int:
    vals = values[candidates]
    best = vals.max() if maximize else vals.min()
    contenders = candidates[vals == best]
    return int(contenders[np.argmin(ids[contenders])])


def greedy_maxmin(points, k: int, metric) -> "list[int]":
    """Farthest-pair seed, then grow by maximizing distance to the chosen set."""
    ds, m = _prep(points, metric, k)
    n = len(ds)
    if k == 1:
        return [int(ds.ids[np.argmin(ds.ids)])]
    i, j, _ = kernels.farthest_pair(ds.coords, m.code)
    chosen = [int(i), int(j)]
    mind = np.minimum(m.dists_to(ds.coords, ds.coords[i]),
                      m.dists_to(ds.coords, ds.coords[j]))
    picked = np.zeros(n, dtype=bool)
    picked[chosen] = True
    while len(chosen) < k:
        cands = np.flatnonzero(~picked)
        nxt = _tie_argbest(mind, cands, ds.ids, maximize=True)
        chosen.append(nxt)
        picked[nxt] = True
        np.minimum(mind, m.dists_to(ds.coords, ds.coords[nxt]), out=mind)
    return [int(ds.ids[c]) for c in chosen]


def greedy_maxsum(points, k: int, metric) -> "list[int]":
    """Farthest-pair seed, then grow by maximizing summed distance to the set."""
    ds, m = _prep(points, metric, k)
    n = len(ds)
    if k == 1:
        return [int(ds.ids[np.argmin(ds.ids)])]
    i, j, _ = kernels.farthest_pair(ds.coords, m.code)
    chosen = [int(i), int(j)]
    sumd = m.dists_to(ds.coords, ds.coords[i]) + m.dists_to(ds.coords, ds.coords[j])
    picked = np.zeros(n, dtype=bool)
    picked[chosen] = True
    while len(chosen) < k:
        cands = np.flatnonzero(~picked)
        nxt = _tie_argbest(sumd, cands, ds.ids, maximize=True)
        chosen.append(nxt)
        picked[nxt] = True
        sumd += m.dists_to(ds.coords, ds.coords[nxt])
    return [int(ds.ids[c]) for c in chosen]


def k_medoids(points, k: int, metric, seed: int = 0) -> "list[int]":
    """PAM: greedy build then best-improvement swaps until a local optimum.

    The mean distance to the closest medoid never increases across swaps.
    Ties during build and swap follow a seeded shuffle, so runs replay.
    """
    ds, m = _prep(points, metric, k)
    n = len(ds)
    if n > PAIRWISE_LIMIT:
        raise ValueError(f"k_medoids materializes an n^2 matrix; n={n} exceeds {PAIRWISE_LIMIT}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)  # tie-break order for equal-cost candidates
    dmat = m.pairwise(ds.coords)

    first = order[int(np.argmin(dmat.sum(axis=0)[order]))]
    medoids = [int(first)]
    nearest = dmat[first].copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[None, :] - dmat, 0.0).sum(axis=1)
        gains[medoids] = -1.0
        best = order[int(np.argmax(gains[order]))]
        medoids.append(int(best))
        np.minimum(nearest, dmat[best], out=nearest)

    def cost_of(meds):
        return float(dmat[meds].min(axis=0).mean())

    cost = cost_of(medoids)
    improved = True
    while improved:
        improved = False
        best_swap, best_cost = None, cost
        med_set = set(medoids)
        for mi, m_old in enumerate(medoids):
            rest = [x for x in medoids if x != m_old]
            base = dmat[rest].min(axis=0) if rest else np.full(n, np.inf)
            for h in order:
                if int(h) in med_set:
                    continue
                c = float(np.minimum(base, dmat[h]).mean())
                if c < best_cost - 1e-15:
                    best_swap, best_cost = (mi, int(h)), c
        if best_swap is not None:
            medoids[best_swap[0]] = best_swap[1]
            cost = best_cost
            improved = True
    return [int(ds.ids[i]) for i in medoids]


@dataclass
class QualityReport:
    f_min: float
    f_sum: float
    medoid_cost: float
    coverage_fraction: float
    jaccard: "float | None" = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "f_min": self.f_min,
            "f_sum": self.f_sum,
            "medoid_cost": self.medoid_cost,
            "coverage_fraction": self.coverage_fraction,
            "jaccard": self.jaccard,
            "degenerate": self.degenerate,
        }

    def to_row(self) -> dict:
        """Flat CSV-ready cells; infinities become empty strings."""
        row = {}
        for key, value in self.to_dict().items():
            if value is None or (isinstance(value, float) and math.isinf(value)):
                row[key] = ""
            else:
                row[key] = value
        return row


def jaccard_distance(a: Iterable, b: Iterable) -> float:
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return 1.0 - len(sa & sb) / len(union)


def quality(points, subset, r: float, metric=None, reference=None) -> QualityReport:
    """Brute-force quality measures of a subset at radius r."""
    ds = as_dataset(points)
    m = get_metric(metric) if metric is not None else ds.default_metric()
    ids = list(subset.ids) if hasattr(subset, "ids") else list(subset)
    idx = ds.indices_for(ids)
    if len(idx) == 0:
        return QualityReport(math.inf, 0.0, math.inf, 0.0,
                             jaccard_distance(ids, reference) if reference is not None else None,
                             degenerate=True)
    sel = ds.coords[idx]
    if len(idx) >= 2:
        dmat = m.pairwise(sel)
        tri = dmat[np.triu_indices(len(idx), k=1)]
        f_min, f_sum = float(tri.min()), float(tri.sum())
    else:
        f_min, f_sum = math.inf, 0.0
    nearest = m.min_dist_to_set(ds.coords, sel)
    return QualityReport(
        f_min=f_min,
        f_sum=f_sum,
        medoid_cost=float(nearest.mean()),
        coverage_fraction=float((nearest <= r).mean()),
        jaccard=jaccard_distance(ids, reference) if reference is not None else None,
    )


def check_maxmin_ratio(points, metric, r: float) -> dict:
    """Compare a covering/dissimilar subset's spread against the exact MaxMin optimum.

    Solves greedily at radius r, then computes the optimal MaxMin value for
    the same subset size by exhaustive search; ok means the optimum is within
    a factor 3 of the subset's least pairwise distance.
    """
    from . import mtree
    from .disc import greedy_disc
    from .oracle import maxmin_value, optimal_maxmin

    ds = as_dataset(points)
    m = get_metric(metric)
    tree = mtree.build(ds, metric=m)
    sub = greedy_disc(tree, r, variant="grey", init="scan")
    lam = maxmin_value(ds, sub.ids, m)
    best = optimal_maxmin(ds, len(sub.ids), m)
    lam_star = maxmin_value(ds, best, m)
    if math.isinf(lam):
        ok = True
    else:
        ok = lam_star <= 3.0 * lam + 1e-12
    return {"lambda": lam, "lambda_star": lam_star, "ok": ok, "k": len(sub.ids)}
