"""Distance metrics, dataset handling, and the closed-form independence bounds."""

import numpy as np
import pytest

from discdiv import oracle
from discdiv.metrics import (ANNULUS_BETA, CATEGORICAL, Dataset, DimensionError,
                             Metric, MetricError, annulus_independence_bound,
                             categorical_point, distance, get_metric,
                             independence_bound, numeric_point)


class TestDistance:
    def test_euclidean_three_four_five(self):
        a = numeric_point(0, 0.0, 0.0)
        b = numeric_point(1, 0.3, 0.4)
        assert distance("euclidean", a, b) == pytest.approx(0.5)

    def test_hamming_counts_differing_coordinates(self):
        a = categorical_point(0, "brandA", "zoom3")
        b = categorical_point(1, "brandA", "zoom5")
        assert distance("hamming", a, b) == 1.0

    def test_identity_is_zero(self):
        p = numeric_point(0, 0.2, 0.9)
        for m in ("euclidean", "manhattan"):
            assert distance(m, p, p) == 0.0
        c = categorical_point(0, "x", "y")
        assert distance("hamming", c, c) == 0.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            distance("euclidean", numeric_point(0, 0.1), numeric_point(1, 0.1, 0.2))

    def test_metric_kind_mismatch_rejected(self):
        with pytest.raises(MetricError):
            distance("hamming", numeric_point(0, 0.1, 0.2), numeric_point(1, 0.3, 0.4))
        with pytest.raises(MetricError):
            distance("euclidean", categorical_point(0, "a"), categorical_point(1, "b"))

    def test_unknown_metric_rejected(self):
        with pytest.raises(MetricError):
            get_metric("cosine")

    def test_symmetry_and_triangle_inequality_randomized(self):
        # 10^4 random triples across all three metrics
        rng = np.random.default_rng(123)
        for name in ("euclidean", "manhattan", "hamming"):
            if name == "hamming":
                pts = [categorical_point(i, *map(str, rng.integers(0, 3, 4)))
                       for i in range(60)]
            else:
                pts = [numeric_point(i, *rng.random(3)) for i in range(60)]
            for _ in range(3334):
                a, b, c = (pts[k] for k in rng.integers(0, 60, 3))
                dab = distance(name, a, b)
                assert dab == distance(name, b, a)
                assert dab >= 0
                assert dab <= distance(name, a, c) + distance(name, c, b) + 1e-12


class TestIndependenceBound:
    def test_known_closed_forms(self):
        assert independence_bound("euclidean", 2) == 5
        assert independence_bound("manhattan", 2) == 7
        assert independence_bound("euclidean", 3) == 24

    def test_unknown_combinations(self):
        assert independence_bound("hamming", 7) is None
        assert independence_bound("euclidean", 5) is None
        assert independence_bound("manhattan", 3) is None

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            independence_bound("euclidean", 0)

    def test_empirical_maximum_never_exceeds_bound(self):
        # random 2D sets: the exact max independent-neighbor count stays under
        # the closed form (the full 1000-instance sweep runs in acceptance)
        rng = np.random.default_rng(7)
        for _ in range(150):
            n = int(rng.integers(5, 60))
            ds = Dataset.from_array(rng.random((n, 2)))
            r = float(rng.uniform(0.05, 0.3))
            assert oracle.max_independent_neighbors(ds, "euclidean", r) <= 5
            assert oracle.max_independent_neighbors(ds, "manhattan", r) <= 7


class TestAnnulusBound:
    def test_euclidean_single_band(self):
        assert annulus_independence_bound("euclidean", 1.0, ANNULUS_BETA) == 9

    def test_manhattan_formula(self):
        assert annulus_independence_bound("manhattan", 0.1, 0.2) == 12

    def test_equal_radii_empty_annulus(self):
        assert annulus_independence_bound("manhattan", 0.3, 0.3) == 0
        assert annulus_independence_bound("euclidean", 0.3, 0.3) == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            annulus_independence_bound("euclidean", 0.0, 0.5)
        with pytest.raises(ValueError):
            annulus_independence_bound("euclidean", 0.5, 0.4)
        with pytest.raises(MetricError):
            annulus_independence_bound("hamming", 0.1, 0.2)

    def test_monotone_in_outer_radius(self):
        rng = np.random.default_rng(99)
        for name in ("euclidean", "manhattan"):
            for _ in range(200):
                r1 = float(rng.uniform(0.01, 0.5))
                steps = np.sort(rng.uniform(r1, 4 * r1, size=8))
                vals = [annulus_independence_bound(name, r1, r2) for r2 in steps]
                assert all(a <= b for a, b in zip(vals, vals[1:]))


class TestDataset:
    def test_mixed_kinds_rejected(self):
        with pytest.raises(DimensionError):
            Dataset.from_points([numeric_point(0, 0.1), categorical_point(1, "a")])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionError):
            Dataset.from_points([numeric_point(0, 0.1), numeric_point(1, 0.1, 0.2)])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            Dataset.from_points([numeric_point(3, 0.1), numeric_point(3, 0.2)])

    def test_categorical_round_trip(self):
        pts = [categorical_point(0, "nikon", "sd"),
               categorical_point(1, "canon", "sd"),
               categorical_point(2, "nikon", "cf")]
        ds = Dataset.from_points(pts)
        assert ds.kind == CATEGORICAL
        assert [ds.point(i) for i in range(3)] == pts

    def test_index_lookup_and_unknown_id(self):
        ds = Dataset.from_points([numeric_point(5, 0.1, 0.2), numeric_point(9, 0.3, 0.4)])
        assert ds.index_of(9) == 1
        with pytest.raises(KeyError):
            ds.index_of(7)

    def test_extent(self):
        ds = Dataset.from_array(np.array([[0.1, 0.9], [0.4, 0.2]]))
        assert ds.extent() == [(0.1, 0.4), (0.2, 0.9)]

    def test_duplicate_points_are_fine(self):
        ds = Dataset.from_array(np.array([[0.5, 0.5], [0.5, 0.5]]))
        m = ds.default_metric()
        assert m.pairwise(ds.coords)[0, 1] == 0.0
