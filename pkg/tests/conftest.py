"""Shared fixtures and frozen instances used across the suite."""

import numpy as np
import pytest

from discdiv import data, metrics, mtree
from discdiv.metrics import Dataset, numeric_point

# Seven 3D points with exactly four minimum covering/dissimilar subsets at
# r = 0.25: {1,4,7}, {2,4,7}, {3,5,6}, {3,5,7}. Margins to the radius are
# >= 0.02 on every pair, so float noise cannot flip an adjacency.
SEVEN_POINT_COORDS = [
    (0.238, 0.323, 0.275),
    (0.231, 0.315, 0.277),
    (0.05, 0.206, 0.257),
    (0.189, 0.05, 0.174),
    (0.316, 0.129, 0.337),
    (0.269, 0.233, 0.071),
    (0.408, 0.39, 0.05),
]
SEVEN_POINT_RADIUS = 0.25
SEVEN_POINT_MINIMA = [{1, 4, 7}, {2, 4, 7}, {3, 5, 6}, {3, 5, 7}]

# Six collinear-ish points realizing the path 1-2-3-4-5-6 plus the 2-5 chord
# at r = 0.21 (tightest edge 0.201, closest non-edge 0.269).
PATH_CHORD_COORDS = [
    (0.22, 0.50),
    (0.40, 0.50),
    (0.42, 0.70),
    (0.58, 0.70),
    (0.60, 0.50),
    (0.78, 0.50),
]
PATH_CHORD_RADIUS = 0.21
PATH_CHORD_EDGES = [(0, 1), (1, 2), (1, 4), (2, 3), (3, 4), (4, 5)]


@pytest.fixture
def seven_point_dataset() -> Dataset:
    return Dataset.from_points(
        [numeric_point(i + 1, *c) for i, c in enumerate(SEVEN_POINT_COORDS)])


@pytest.fixture
def path_chord_dataset() -> Dataset:
    return Dataset.from_points(
        [numeric_point(i + 1, *c) for i, c in enumerate(PATH_CHORD_COORDS)])


@pytest.fixture(scope="session")
def uniform_2000() -> Dataset:
    return data.gen_uniform(2000, 2, seed=11)


@pytest.fixture(scope="session")
def tree_2000(uniform_2000) -> mtree.MTree:
    return mtree.build(uniform_2000)


def brute_neighbor_counts(ds: Dataset, r: float, metric) -> np.ndarray:
    m = metrics.get_metric(metric)
    dmat = m.pairwise(ds.coords)
    return (dmat <= r).sum(axis=1) - 1


def random_dataset(rng: np.random.Generator, n: int, d: int = 2) -> Dataset:
    return Dataset.from_array(rng.random((n, d)))
