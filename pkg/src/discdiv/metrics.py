"""Distance metrics, the dataset abstraction, and closed-form independence bounds.

Two objects are "similar" at radius r when their distance is <= r and
"dissimilar" (independent) when it is > r. The bounds here cap how many
pairwise-dissimilar neighbors a single object can have, which drives the
approximation guarantees of the solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

NUMERIC = "numeric"
CATEGORICAL = "categorical"

_METRIC_CODES = {"euclidean": 0, "manhattan": 1, "hamming": 2}

# golden ratio: band growth factor of the euclidean annulus partition
ANNULUS_BETA = (1.0 + math.sqrt(5.0)) / 2.0

_CEIL_SLACK = 1e-9  # absorb float noise when a ratio sits exactly on a band edge


class MetricError(ValueError):
    """Metric incompatible with the data it is applied to."""


class DimensionError(ValueError):
    """Operands with mismatched dimensionality or kind."""


@dataclass(frozen=True)
class Point:
    """One result object: an id plus numeric coordinates or category labels."""

    id: int
    kind: str
    coords: tuple

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"point id must be >= 0, got {self.id}")
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"unknown point kind {self.kind!r}")
        if len(self.coords) < 1:
            raise DimensionError("points need at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)


def numeric_point(pid: int, *coords: float) -> Point:
    return Point(pid, NUMERIC, tuple(float(c) for c in coords))


def categorical_point(pid: int, *labels: str) -> Point:
    return Point(pid, CATEGORICAL, tuple(str(v) for v in labels))


@dataclass(frozen=True)
class Metric:
    """A named distance function plus the point kind it applies to."""

    name: str

    def __post_init__(self):
        if self.name not in _METRIC_CODES:
            raise MetricError(f"unknown metric {self.name!r}")

    @property
    def code(self) -> int:
        return _METRIC_CODES[self.name]

    @property
    def kind(self) -> str:
        return CATEGORICAL if self.name == "hamming" else NUMERIC

    def dists_to(self, X: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Distances from every row of X to the single point q."""
        return kernels.dists_to_point(X, q, self.code)

    def pairwise(self, X: np.ndarray) -> np.ndarray:
        return kernels.pairwise_dists(X, self.code)

    def min_dist_to_set(self, X: np.ndarray, S: np.ndarray) -> np.ndarray:
        return kernels.min_dist_to_set(X, S, self.code)

    def neighbor_counts(self, X: np.ndarray, r: float) -> np.ndarray:
        return kernels.neighbor_counts(X, float(r), self.code)


EUCLIDEAN = Metric("euclidean")
MANHATTAN = Metric("manhattan")
HAMMING = Metric("hamming")


def get_metric(name: "str | Metric") -> Metric:
    if isinstance(name, Metric):
        return name
    return Metric(str(name).lower())


def distance(metric: "str | Metric", a: Point, b: Point) -> float:
    """Distance between two points; validates kind and dimensionality."""
    m = get_metric(metric)
    if a.kind != b.kind:
        raise DimensionError(f"mixed point kinds: {a.kind} vs {b.kind}")
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if m.kind != a.kind:
        raise MetricError(f"{m.name} metric is not defined for {a.kind} points")
    if a.kind == CATEGORICAL:
        return float(sum(1 for x, y in zip(a.coords, b.coords) if x != y))
    ax = np.asarray(a.coords, dtype=np.float64)
    bx = np.asarray(b.coords, dtype=np.float64)
    if m.name == "euclidean":
        return float(math.sqrt(((ax - bx) ** 2).sum()))
    return float(np.abs(ax - bx).sum())


def independence_bound(metric: "str | Metric", d: int) -> "int | None":
    """Max number of pairwise-dissimilar neighbors of one object, when known.

    Known closed forms: 5 for euclidean in 2D, 7 for manhattan in 2D,
    24 for euclidean in 3D. Returns None for every other combination.
    """
    if d < 1:
        raise ValueError("dimensionality must be >= 1")
    m = get_metric(metric)
    table = {("euclidean", 2): 5, ("manhattan", 2): 7, ("euclidean", 3): 24}
    return table.get((m.name, d))


def annulus_independence_bound(metric: "str | Metric", r1: float, r2: float) -> int:
    """Cap on objects within r2 of a center that are pairwise > r1 apart (2D).

    euclidean: 9 * ceil(log_beta(r2/r1)) with beta the golden ratio;
    manhattan: 4 * sum_{i=1..g}(2i+1) with g = ceil((r2-r1)/r1).
    """
    if r1 <= 0:
        raise ValueError("inner radius must be positive")
    if r2 < r1:
        raise ValueError("outer radius must be >= inner radius")
    m = get_metric(metric)
    if m.name == "euclidean":
        ratio = r2 / r1
        bands = max(0, math.ceil(math.log(ratio, ANNULUS_BETA) - _CEIL_SLACK))
        return 9 * bands
    if m.name == "manhattan":
        g = max(0, math.ceil((r2 - r1) / r1 - _CEIL_SLACK))
        return 4 * (g * g + 2 * g)  # sum of (2i+1) for i=1..g is g^2+2g
    raise MetricError(f"no annulus bound available for metric {m.name!r}")


class Dataset:
    """A uniform collection of points with dense coordinate storage.

    Numeric coordinates are stored as a float64 (n, d) matrix. Categorical
    labels are mapped per-dimension to integer codes kept in float64 (codes
    are small integers, exact in float64), with vocabularies retained so
    points can be reconstructed verbatim.
    """

    def __init__(self, kind: str, ids: np.ndarray, coords: np.ndarray,
                 vocab: "list[list[str]] | None" = None):
        if kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"unknown dataset kind {kind!r}")
        if len(ids) == 0:
            raise ValueError("dataset must hold at least one point")
        if kind == CATEGORICAL and vocab is None:
            raise ValueError("categorical dataset needs a vocabulary")
        self.kind = kind
        self.ids = np.asarray(ids, dtype=np.int64)
        self.coords = np.ascontiguousarray(coords, dtype=np.float64)
        self.vocab = vocab
        if len(set(self.ids.tolist())) != len(self.ids):
            raise ValueError("point ids must be unique within a dataset")
        self._id_to_index = {int(pid): i for i, pid in enumerate(self.ids)}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_points(cls, points: Sequence[Point]) -> "Dataset":
        points = list(points)
        if not points:
            raise ValueError("dataset must hold at least one point")
        kind = points[0].kind
        dim = points[0].dim
        for p in points:
            if p.kind != kind:
                raise DimensionError("all points in a dataset must share one kind")
            if p.dim != dim:
                raise DimensionError("all points in a dataset must share one dimensionality")
        ids = np.array([p.id for p in points], dtype=np.int64)
        if kind == NUMERIC:
            coords = np.array([p.coords for p in points], dtype=np.float64)
            return cls(kind, ids, coords)
        vocab: list[list[str]] = [[] for _ in range(dim)]
        lookup: list[dict] = [{} for _ in range(dim)]
        coords = np.empty((len(points), dim), dtype=np.float64)
        for i, p in enumerate(points):
            for j, label in enumerate(p.coords):
                if label not in lookup[j]:
                    lookup[j][label] = len(vocab[j])
                    vocab[j].append(label)
                coords[i, j] = lookup[j][label]
        return cls(kind, ids, coords, vocab)

    @classmethod
    def from_array(cls, coords: np.ndarray, ids: "np.ndarray | None" = None) -> "Dataset":
        coords = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        if ids is None:
            ids = np.arange(coords.shape[0], dtype=np.int64)
        return cls(NUMERIC, ids, coords)

    # -- access ------------------------------------------------------------

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    def index_of(self, pid: int) -> int:
        try:
            return self._id_to_index[int(pid)]
        except KeyError:
            raise KeyError(f"unknown point id {pid}") from None

    def point(self, index: int) -> Point:
        row = self.coords[index]
        if self.kind == NUMERIC:
            return Point(int(self.ids[index]), NUMERIC, tuple(float(v) for v in row))
        labels = tuple(self.vocab[j][int(row[j])] for j in range(self.dim))
        return Point(int(self.ids[index]), CATEGORICAL, labels)

    def points(self) -> "list[Point]":
        return [self.point(i) for i in range(len(self))]

    def indices_for(self, ids: Iterable[int]) -> np.ndarray:
        return np.array([self.index_of(pid) for pid in ids], dtype=np.int64)

    def default_metric(self) -> Metric:
        return HAMMING if self.kind == CATEGORICAL else EUCLIDEAN

    def extent(self) -> "list[tuple[float, float]]":
        return [(float(self.coords[:, j].min()), float(self.coords[:, j].max()))
                for j in range(self.dim)]


def as_dataset(points: "Dataset | Sequence[Point]") -> Dataset:
    if isinstance(points, Dataset):
        return points
    return Dataset.from_points(points)
