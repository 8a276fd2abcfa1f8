"""Incremental radius adaptation: supersets, validity, bounds, continuity."""

import numpy as np
import pytest

from conftest import random_dataset
from discdiv import data, mtree, zoom
from discdiv.disc import DiverseSubset, greedy_disc, verify
from discdiv.metrics import Dataset, annulus_independence_bound, numeric_point
from discdiv.zoom import (local_zoom, maintain_closest_black, zoom_diff, zoom_in,
                          zoom_out)


def solve(tree, r):
    return greedy_disc(tree, r, init="scan")


class TestMaintainClosestBlack:
    def test_selected_objects_get_zero(self, tree_2000):
        sub = solve(tree_2000, 0.1)
        cb = maintain_closest_black(tree_2000, sub)
        idx = tree_2000.ds.indices_for(sub.ids)
        assert (cb[idx] == 0).all()

    def test_single_selected_object(self, uniform_2000, tree_2000):
        cb = maintain_closest_black(tree_2000, [5])
        want = tree_2000.metric.dists_to(uniform_2000.coords, uniform_2000.coords[5])
        assert np.allclose(cb, want)
        assert tree_2000.closest_black(5) == 0.0
        assert tree_2000.closest_black(7) == pytest.approx(want[7])

    def test_empty_subset_is_infinite(self, tree_2000):
        cb = maintain_closest_black(tree_2000, [])
        assert np.isinf(cb).all()

    def test_matches_brute_force(self, uniform_2000, tree_2000):
        rng = np.random.default_rng(0)
        ids = rng.choice(2000, size=17, replace=False).tolist()
        cb = maintain_closest_black(tree_2000, ids)
        sel = uniform_2000.coords[np.asarray(ids)]
        brute = np.stack([tree_2000.metric.dists_to(sel, q)
                          for q in uniform_2000.coords]).min(axis=1)
        assert np.allclose(cb, brute)


class TestZoomIn:
    def test_rejects_bad_radii(self, tree_2000):
        base = solve(tree_2000, 0.1)
        with pytest.raises(ValueError):
            zoom_in(tree_2000, base, 0.1, 0.1)
        with pytest.raises(ValueError):
            zoom_in(tree_2000, base, 0.1, 0.2)

    def test_nothing_uncovered_returns_base(self, tree_2000):
        base = solve(tree_2000, 0.1)
        cb = maintain_closest_black(tree_2000, base)
        outside = cb[cb > 0]
        r_new = (float(outside[outside < 0.1].max()) + 0.1) / 2
        got = zoom_in(tree_2000, base, 0.1, r_new)
        assert got.ids == base.ids

    def test_collinear_promotion(self):
        ds = Dataset.from_array(np.array([[0.0, 0.5], [0.4, 0.5], [0.8, 0.5]]))
        tree = mtree.build(ds)
        base = solve(tree, 0.5)
        assert base.ids == [1]  # the middle point covers both ends
        got = zoom_in(tree, base, 0.5, 0.3)
        assert set(got.ids) == {0, 1, 2}
        checks = verify(ds, got, 0.3)
        assert checks["coverage"] and checks["independence"]

    @pytest.mark.parametrize("greedy", [False, True])
    def test_superset_and_validity_randomized(self, greedy):
        rng = np.random.default_rng(1 + int(greedy))
        for _ in range(8):
            ds = random_dataset(rng, 300)
            tree = mtree.build(ds)
            r = float(rng.uniform(0.1, 0.3))
            r_new = float(rng.uniform(0.3, 0.95)) * r
            base = solve(tree, r)
            got = zoom_in(tree, base, r, r_new, greedy=greedy)
            assert set(base.ids) <= set(got.ids)
            checks = verify(ds, got, r_new)
            assert checks["coverage"] and checks["independence"]

    def test_annulus_bound_on_growth(self):
        rng = np.random.default_rng(3)
        for metric in ("euclidean", "manhattan"):
            for _ in range(10):
                n = int(rng.integers(6, 15))
                ds = random_dataset(rng, n)
                tree = mtree.build(ds, metric=metric)
                r = float(rng.uniform(0.2, 0.5))
                r_new = float(rng.uniform(0.4, 0.9)) * r
                base = solve(tree, r)
                got = zoom_in(tree, base, r, r_new)
                bound = annulus_independence_bound(metric, r_new, r)
                assert len(got) <= bound * len(base)


class TestZoomOut:
    def test_rejects_bad_radii(self, tree_2000):
        base = solve(tree_2000, 0.1)
        with pytest.raises(ValueError):
            zoom_out(tree_2000, base, 0.1, 0.05)
        with pytest.raises(ValueError):
            zoom_out(tree_2000, base, 0.1, 0.1, variant="greedy_z")

    def test_diameter_keeps_one_base_member(self, tree_2000):
        base = solve(tree_2000, 0.1)
        got = zoom_out(tree_2000, base, 0.1, 2.0, variant="plain")
        assert len(got) == 1
        assert got.ids[0] in base.ids

    @pytest.mark.parametrize("variant", ["plain", "greedy_a", "greedy_b", "greedy_c"])
    def test_validity_randomized(self, variant):
        rng = np.random.default_rng(hash(variant) % 2**31)
        for _ in range(6):
            ds = random_dataset(rng, 300)
            tree = mtree.build(ds)
            r = float(rng.uniform(0.05, 0.15))
            r_new = r * float(rng.uniform(1.2, 2.5))
            base = solve(tree, r)
            got = zoom_out(tree, base, r, r_new, variant=variant)
            checks = verify(ds, got, r_new)
            assert checks["coverage"] and checks["independence"]
            assert set(got.metadata["survivors"]) <= set(base.ids)

    def test_eviction_and_addition_bounds(self):
        rng = np.random.default_rng(5)
        for _ in range(12):
            n = int(rng.integers(8, 15))
            ds = random_dataset(rng, n)
            tree = mtree.build(ds)
            r = float(rng.uniform(0.15, 0.3))
            r_new = r * float(rng.uniform(1.2, 2.0))
            base = solve(tree, r)
            got = zoom_out(tree, base, r, r_new, variant="greedy_a")
            removed = set(base.ids) - set(got.ids)
            added = set(got.ids) - set(base.ids)
            # every survivor evicts at most the annulus capacity
            cap = annulus_independence_bound("euclidean", r, r_new)
            for evicted in got.metadata["evictions"].values():
                assert len(evicted) <= cap
            # each removed member lets in at most B-1 replacements
            assert len(added) <= 4 * max(1, len(removed)) if removed else len(added) == 0

    def test_covered_member_evicted_and_region_recovered(self):
        pts = [numeric_point(1, 0.2, 0.5), numeric_point(2, 0.45, 0.5),
               numeric_point(3, 0.8, 0.5), numeric_point(5, 0.45, 0.32)]
        ds = Dataset.from_points(pts)
        tree = mtree.build(ds)
        base = DiverseSubset(radius=0.2, ids=[1, 2, 3], algorithm="given")
        checks = verify(ds, base, 0.2)
        assert checks["coverage"] and checks["independence"]
        got = zoom_out(tree, base, 0.2, 0.3, variant="greedy_a")
        assert 2 not in got.ids          # now covered by the kept member
        assert got.metadata["evictions"][1] == [2]
        assert 5 in got.metadata["added"]  # the orphaned region is re-covered
        checks = verify(ds, got, 0.3)
        assert checks["coverage"] and checks["independence"]

    def test_retention_variant_keeps_more_on_average(self):
        kept_a, kept_b = [], []
        for seed in range(10):
            ds = data.gen_clustered(600, 2, 5, seed=seed)
            tree = mtree.build(ds)
            base = solve(tree, 0.05)
            a = zoom_out(tree, base, 0.05, 0.09, variant="greedy_a")
            b = zoom_out(tree, base, 0.05, 0.09, variant="greedy_b")
            kept_a.append(len(set(a.ids) & set(base.ids)))
            kept_b.append(len(set(b.ids) & set(base.ids)))
        assert np.mean(kept_b) >= np.mean(kept_a)


class TestLocalZoom:
    def test_focus_must_be_member(self, tree_2000):
        base = solve(tree_2000, 0.1)
        outsider = next(i for i in range(2000) if i not in base.id_set())
        with pytest.raises(ValueError):
            local_zoom(tree_2000, base, 0.1, int(outsider), 0.05)

    def test_focus_without_neighbors_keeps_everything(self):
        coords = np.array([[0.1, 0.1], [0.9, 0.1], [0.1, 0.9], [0.9, 0.9]])
        ds = Dataset.from_array(coords)
        tree = mtree.build(ds)
        base = solve(tree, 0.2)
        assert set(base.ids) == {0, 1, 2, 3}
        got = local_zoom(tree, base, 0.2, 0, 0.1)
        assert set(got.ids) == set(base.ids)

    def test_outside_members_untouched(self, tree_2000):
        base = solve(tree_2000, 0.12)
        focus = base.ids[2]
        got = local_zoom(tree_2000, base, 0.12, focus, 0.06)
        hood = set(got.metadata["neighborhood_ids"])
        outside_before = [i for i in base.ids if i not in hood]
        outside_after = [i for i in got.ids if i not in hood]
        assert outside_before == outside_after
        assert got.metadata["local_verify"]["coverage"]
        assert got.metadata["local_verify"]["independence"]

    def test_local_result_matches_zoom_on_extracted_subset(self, uniform_2000, tree_2000):
        base = solve(tree_2000, 0.1)
        focus = base.ids[0]
        fidx = uniform_2000.index_of(focus)
        hood = sorted(set(tree_2000.range_query(fidx, 0.1)) | {fidx})
        sub_ds = Dataset.from_points([uniform_2000.point(i) for i in hood])
        sub_tree = mtree.build(sub_ds, tree_2000.config, tree_2000.metric)
        want = zoom_in(sub_tree, DiverseSubset(0.1, [focus], "base"), 0.1, 0.05)
        got = local_zoom(tree_2000, base, 0.1, focus, 0.05)
        assert got.metadata["local_ids"] == want.ids

    def test_local_zoom_out_collapses_to_focus(self, tree_2000):
        base = solve(tree_2000, 0.1)
        focus = base.ids[1]
        got = local_zoom(tree_2000, base, 0.1, focus, 0.18)
        assert got.metadata["local_ids"] == [focus]
        assert focus in got.ids


class TestContinuity:
    def test_adapted_solutions_drift_less_than_scratch(self):
        from discdiv.baselines import jaccard_distance
        in_adapted, in_scratch, out_adapted, out_scratch = [], [], [], []
        for seed in range(10):
            ds = data.gen_clustered(800, 2, 5, seed=100 + seed)
            tree = mtree.build(ds)
            base_in = solve(tree, 0.08)
            adapted = zoom_in(tree, base_in, 0.08, 0.05, greedy=True)
            scratch = solve(tree, 0.05)
            in_adapted.append(jaccard_distance(adapted.ids, base_in.ids))
            in_scratch.append(jaccard_distance(scratch.ids, base_in.ids))
            base_out = solve(tree, 0.05)
            adapted_o = zoom_out(tree, base_out, 0.05, 0.08, variant="greedy_a")
            scratch_o = solve(tree, 0.08)
            out_adapted.append(jaccard_distance(adapted_o.ids, base_out.ids))
            out_scratch.append(jaccard_distance(scratch_o.ids, base_out.ids))
        assert np.mean(in_adapted) < np.mean(in_scratch)
        assert np.mean(out_adapted) < np.mean(out_scratch)


class TestDiff:
    def test_partition_properties(self):
        d = zoom_diff([1, 2, 3], [2, 3, 4, 5])
        assert d == {"kept": [2, 3], "added": [4, 5], "removed": [1]}

    def test_identity(self):
        d = zoom_diff([1, 2], [1, 2])
        assert d["kept"] == [1, 2] and not d["added"] and not d["removed"]
