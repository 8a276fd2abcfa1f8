"""Experiment harness: row schemas, replay determinism, trends, CLI round trips."""

import csv
import io
import json

import numpy as np
import pytest

from discdiv import bench, cli


def small_size_config(**overrides):
    cfg = {
        "dataset": {"type": "uniform", "n": 400, "d": 2},
        "metric": "euclidean",
        "radii": [0.05, 0.1],
        "algorithms": ["basic_disc", "greedy_disc[grey]", "greedy_c"],
        "seeds": [0, 1],
        "count_init": "scan",
    }
    cfg.update(overrides)
    return cfg


def strip_wall_time(text: str) -> str:
    rows = list(csv.reader(io.StringIO(text)))
    drop = rows[0].index("wall_time_ms")
    return "\n".join(",".join(c for i, c in enumerate(row) if i != drop) for row in rows)


class TestRunSuite:
    def test_rows_and_verification(self):
        columns, rows = bench.run_suite(small_size_config())
        assert columns == bench.SIZE_COLUMNS
        assert len(rows) == 2 * 3 * 2  # seeds x algorithms x radii
        for row in rows:
            assert row["coverage"] is True
            if row["algorithm"] != "greedy_c":
                assert row["independence"] is True

    def test_replay_is_byte_identical_modulo_wall_time(self):
        cfg = small_size_config()
        a = bench.to_csv_text(*bench.run_suite(cfg))
        b = bench.to_csv_text(*bench.run_suite(cfg))
        assert strip_wall_time(a) == strip_wall_time(b)

    def test_diameter_radius_gives_singletons(self):
        cfg = small_size_config(radii=[2.0], algorithms=["basic_disc", "greedy_disc[grey]",
                                                         "greedy_c", "fast_c"])
        _, rows = bench.run_suite(cfg)
        assert all(row["size"] == 1 for row in rows)

    def test_pruning_never_costs_more(self):
        base = small_size_config(algorithms=["basic_disc", "greedy_disc[grey]"],
                                 count_init="query")
        _, pruned = bench.run_suite({**base, "pruned": True})
        _, full = bench.run_suite({**base, "pruned": False})
        for a, b in zip(pruned, full):
            assert a["size"] == b["size"]
            assert a["access_cost"] <= b["access_cost"]

    def test_unknown_config_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config"):
            bench.run_suite(small_size_config(radius=[0.1]))

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            bench.run_suite(small_size_config(radii=[0.0]))


class TestZoomSuite:
    def test_ladder_validation(self):
        with pytest.raises(ValueError):
            bench.run_zoom_suite({"ladder": [0.1]})
        with pytest.raises(ValueError):
            bench.run_zoom_suite({"ladder": [0.1, 0.1]})
        with pytest.raises(ValueError):
            bench.run_zoom_suite({"ladder": [0.1, 0.2, 0.15]})

    def test_zoom_in_rows(self):
        cfg = {"dataset": {"type": "clustered", "n": 500, "d": 2, "n_clusters": 4},
               "ladder": [0.12, 0.08, 0.05], "seeds": [0, 1], "variant": "greedy"}
        columns, rows = bench.run_zoom_suite(cfg)
        assert columns == bench.ZOOM_COLUMNS
        assert len(rows) == 2 * 2
        for row in rows:
            assert row["direction"] == "in"
            assert row["superset_ok"] is True
            assert row["coverage"] is True and row["independence"] is True

    def test_zoom_out_variant_c_smaller_than_plain_on_average(self):
        sizes = {}
        for variant in ("plain", "greedy_c"):
            cfg = {"dataset": {"type": "clustered", "n": 700, "d": 2, "n_clusters": 5},
                   "ladder": [0.03, 0.05, 0.08], "seeds": [0, 1, 2, 3, 4, 5],
                   "variant": variant}
            _, rows = bench.run_zoom_suite(cfg)
            sizes[variant] = np.mean([row["adapted_size"] for row in rows])
        assert sizes["greedy_c"] <= sizes["plain"]


class TestTreeSuite:
    def test_rows(self):
        cfg = {"dataset": {"type": "uniform", "n": 600, "d": 2},
               "policies": [{"promote": "min_overlap", "partition": "closest_pivot"},
                            {"promote": "random", "partition": "closest_pivot"}],
               "capacities": [10, 25], "seeds": [0], "workload_r": 0.05,
               "count_init": "query"}
        columns, rows = bench.run_tree_suite(cfg)
        assert columns == bench.TREE_COLUMNS
        assert len(rows) == 4
        for row in rows:
            assert 0.0 <= row["fat_factor"] <= 1.0
            assert row["workload_size"] > 0


class TestReporting:
    def test_aggregate_rows(self):
        rows = [{"algorithm": "a", "r": 0.1, "size": 10},
                {"algorithm": "a", "r": 0.1, "size": 20},
                {"algorithm": "b", "r": 0.1, "size": 5}]
        cols, out = bench.aggregate_rows(rows, ["algorithm"], ["size"])
        assert cols == ["algorithm", "mean_size", "rows"]
        assert out[0] == {"algorithm": "a", "mean_size": 15.0, "rows": 2}

    def test_csv_round_trip(self, tmp_path):
        columns, rows = bench.run_suite(small_size_config(seeds=[0]))
        path = tmp_path / "out.csv"
        bench.write_csv(path, columns, rows)
        back_cols, back_rows = bench.read_csv(path)
        assert back_cols == columns
        assert len(back_rows) == len(rows)
        assert back_rows[0]["algorithm"] == rows[0]["algorithm"]


class TestCli:
    def test_full_pipeline(self, tmp_path, capsys):
        data_csv = tmp_path / "points.csv"
        cli.main(["gen", "--type", "clustered", "--n", "300", "--d", "2",
                  "--seed", "3", "--out", str(data_csv)])
        assert data_csv.exists()

        stats_json = tmp_path / "stats.json"
        cli.main(["index", "--data", str(data_csv), "--out", str(stats_json)])
        stats = json.loads(stats_json.read_text())
        assert stats["n"] == 300 and 0.0 <= stats["fat_factor"] <= 1.0

        sol_json = tmp_path / "sol.json"
        cli.main(["disc", "--data", str(data_csv), "--r", "0.1",
                  "--algorithm", "greedy_disc[grey]", "--out", str(sol_json)])
        sol = json.loads(sol_json.read_text())
        assert sol["verify"] == {"coverage": True, "independence": True}

        zoom_json = tmp_path / "zoomed.json"
        cli.main(["zoom", "--data", str(data_csv), "--base", str(sol_json),
                  "--r-new", "0.06", "--variant", "greedy", "--out", str(zoom_json)])
        zoomed = json.loads(zoom_json.read_text())
        assert set(sol["ids"]) <= set(zoomed["ids"])
        assert zoomed["verify"]["coverage"] is True
        assert sorted(zoomed["diff"]) == ["added", "kept", "removed"]

        cfg = tmp_path / "bench.json"
        cfg.write_text(json.dumps({
            "dataset": {"type": "uniform", "n": 200, "d": 2},
            "radii": [0.1], "algorithms": ["basic_disc"], "seeds": [0],
            "count_init": "scan"}))
        out_csv = tmp_path / "bench.csv"
        cli.main(["bench", "--suite", "size", "--config", str(cfg),
                  "--out", str(out_csv)])
        report_csv = tmp_path / "report.csv"
        cli.main(["report", "--input", str(out_csv), "--group-by", "algorithm,r",
                  "--values", "size,access_cost", "--out", str(report_csv)])
        cols, rows = bench.read_csv(report_csv)
        assert cols == ["algorithm", "r", "mean_size", "mean_access_cost", "rows"]
        assert len(rows) == 1

    def test_local_zoom_via_cli(self, tmp_path):
        data_csv = tmp_path / "points.csv"
        cli.main(["gen", "--n", "200", "--seed", "1", "--out", str(data_csv)])
        sol_json = tmp_path / "sol.json"
        cli.main(["disc", "--data", str(data_csv), "--r", "0.2", "--out", str(sol_json)])
        sol = json.loads(sol_json.read_text())
        out_json = tmp_path / "local.json"
        cli.main(["zoom", "--data", str(data_csv), "--base", str(sol_json),
                  "--r-new", "0.1", "--focus", str(sol["ids"][0]),
                  "--out", str(out_json)])
        local = json.loads(out_json.read_text())
        assert local["algorithm"].startswith("local_")


class TestQualityColumns:
    def test_quality_flag_appends_report_columns(self):
        cfg = small_size_config(seeds=[0], radii=[0.1],
                                algorithms=["greedy_disc[grey]"], quality=True)
        columns, rows = bench.run_suite(cfg)
        assert columns == bench.SIZE_COLUMNS + bench.QUALITY_COLUMNS
        row = rows[0]
        assert row["coverage_fraction"] == 1.0
        assert row["f_min"] > 0.1  # members are pairwise dissimilar
        text = bench.to_csv_text(columns, rows)
        assert "f_min" in text.splitlines()[0]
