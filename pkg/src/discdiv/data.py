"""Synthetic dataset generators and CSV ingestion.

Numeric data lives in the unit cube. The clustered generator draws
hyperspherical Gaussian clusters of uneven sizes and per-cluster spread
in [SIGMA_MIN, SIGMA_MAX], clipped back into the cube.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .metrics import CATEGORICAL, NUMERIC, Dataset

SIGMA_MIN = 0.02
SIGMA_MAX = 0.08


def gen_uniform(n: int, d: int, seed: int) -> Dataset:
    """n points i.i.d. uniform in the unit cube, replayable by seed."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    return Dataset.from_array(rng.random((n, d)))


def gen_clustered(n: int, d: int, n_clusters: int, seed: int) -> Dataset:
    """Gaussian clusters with uneven sizes around uniform centers."""
    if not 1 <= n_clusters <= n:
        raise ValueError("need 1 <= n_clusters <= n")
    rng = np.random.default_rng(seed)
    centers = rng.random((n_clusters, d))
    sigmas = rng.uniform(SIGMA_MIN, SIGMA_MAX, size=n_clusters)
    weights = rng.dirichlet(np.full(n_clusters, 1.5))
    sizes = np.maximum(1, np.round(weights * n).astype(int))
    # rounding drift: trim or pad the largest cluster
    sizes[int(np.argmax(sizes))] += n - int(sizes.sum())
    rows = []
    for c in range(n_clusters):
        rows.append(centers[c] + rng.normal(0.0, sigmas[c], size=(sizes[c], d)))
    coords = np.clip(np.vstack(rows), 0.0, 1.0)
    return Dataset.from_array(coords)


def make_dataset(spec: dict) -> Dataset:
    """Build a dataset from a config mapping (used by bench configs and the service)."""
    kind = spec.get("type", "uniform")
    if kind == "uniform":
        return gen_uniform(int(spec.get("n", 1000)), int(spec.get("d", 2)),
                           int(spec.get("seed", 0)))
    if kind == "clustered":
        return gen_clustered(int(spec.get("n", 1000)), int(spec.get("d", 2)),
                             int(spec.get("n_clusters", 5)), int(spec.get("seed", 0)))
    if kind == "csv":
        return load_csv(spec["path"], spec.get("kind", NUMERIC),
                        bool(spec.get("normalize", True)))
    raise ValueError(f"unknown dataset type {kind!r}")


def _normalize_unit(coords: np.ndarray) -> np.ndarray:
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = hi - lo
    out = np.zeros_like(coords)
    for j in range(coords.shape[1]):
        if span[j] > 0:
            out[:, j] = (coords[:, j] - lo[j]) / span[j]
        # constant column: everything maps to 0
    return out


def _parse_rows(rows: "list[list[str]]", kind: str, normalize: bool) -> Dataset:
    if not rows:
        raise ValueError("empty CSV")
    header = rows[0]
    body = rows[1:]
    if not body:
        raise ValueError("CSV has a header but no data rows")
    has_id = bool(header) and header[0].strip().lower() == "id"
    dim = len(header) - (1 if has_id else 0)
    if dim < 1:
        raise ValueError("CSV needs at least one coordinate column")
    ids = []
    raw = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValueError(f"ragged row at line {lineno}: "
                             f"expected {len(header)} fields, got {len(row)}")
        if has_id:
            ids.append(int(row[0]))
            raw.append(row[1:])
        else:
            ids.append(lineno - 2)
            raw.append(row)
    ids_arr = np.asarray(ids, dtype=np.int64)
    if kind == NUMERIC:
        coords = np.empty((len(raw), dim), dtype=np.float64)
        for i, row in enumerate(raw):
            for j, cell in enumerate(row):
                try:
                    coords[i, j] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"non-numeric value {cell!r} in numeric CSV "
                        f"(column {header[j + (1 if has_id else 0)]!r})") from None
        if normalize:
            coords = _normalize_unit(coords)
        return Dataset(NUMERIC, ids_arr, coords)
    if kind == CATEGORICAL:
        vocab: list[list[str]] = [[] for _ in range(dim)]
        lookup: list[dict] = [{} for _ in range(dim)]
        coords = np.empty((len(raw), dim), dtype=np.float64)
        for i, row in enumerate(raw):
            for j, label in enumerate(row):
                if label not in lookup[j]:
                    lookup[j][label] = len(vocab[j])
                    vocab[j].append(label)
                coords[i, j] = lookup[j][label]
        return Dataset(CATEGORICAL, ids_arr, coords, vocab)
    raise ValueError(f"unknown kind {kind!r}")


def load_csv(path, kind: str = NUMERIC, normalize: bool = True) -> Dataset:
    """Load a header-ed CSV into a dataset.

    An optional leading "id" column supplies ids, otherwise row order does.
    Numeric data is min-max normalized per dimension when requested;
    categorical labels are preserved verbatim.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    return _parse_rows(rows, kind, normalize)


def loads_csv(text: str, kind: str = NUMERIC, normalize: bool = True) -> Dataset:
    rows = [row for row in csv.reader(io.StringIO(text))]
    return _parse_rows(rows, kind, normalize)


def save_csv(ds: Dataset, path) -> None:
    """Write a dataset with an id column; floats use shortest round-trip repr."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"x{j}" for j in range(ds.dim)])
        for i in range(len(ds)):
            if ds.kind == NUMERIC:
                row = [repr(float(v)) for v in ds.coords[i]]
            else:
                row = [ds.vocab[j][int(ds.coords[i, j])] for j in range(ds.dim)]
            writer.writerow([int(ds.ids[i])] + row)
