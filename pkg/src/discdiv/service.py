"""HTTP/JSON facade: datasets, solving, and incremental zooming per session.

State lives in an in-memory store (optionally snapshotted to a JSON file).
Each dataset session allows one mutating operation at a time; concurrent
mutations receive 409 instead of corrupting shared color state.

Environment:
  DISCDIV_MAX_POINTS   upload/generation cap (default 100000)
  DISCDIV_PERSIST      path for JSON snapshots (optional)
  DISCDIV_STATIC       directory of built UI assets to serve at /ui (optional)
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import data as data_mod
from . import mtree
from .baselines import quality
from .disc import (DiverseSubset, basic_disc, fast_c, greedy_c, greedy_disc,
                   verify)
from .metrics import NUMERIC, Dataset, get_metric
from .zoom import local_zoom, zoom_diff, zoom_in, zoom_out

DEFAULT_MAX_POINTS = 100_000

SOLVERS = {
    "basic_disc": lambda tree, r: basic_disc(tree, r),
    "greedy_disc[grey]": lambda tree, r: greedy_disc(tree, r, variant="grey"),
    "greedy_disc[white]": lambda tree, r: greedy_disc(tree, r, variant="white"),
    "greedy_disc[lazy_grey]": lambda tree, r: greedy_disc(tree, r, variant="lazy_grey"),
    "greedy_disc[lazy_white]": lambda tree, r: greedy_disc(tree, r, variant="lazy_white"),
    "greedy_c": lambda tree, r: greedy_c(tree, r),
    "fast_c": lambda tree, r: fast_c(tree, r),
}

COVERAGE_ONLY = {"greedy_c", "fast_c"}

ZOOM_IN_VARIANTS = {"plain", "greedy"}
ZOOM_OUT_VARIANTS = {"plain", "greedy_a", "greedy_b", "greedy_c"}


class GenerateSpec(BaseModel):
    type: str = "uniform"
    n: int = 1000
    d: int = 2
    n_clusters: int = 5
    seed: int = 0


class DatasetRequest(BaseModel):
    generate: "GenerateSpec | None" = None
    csv: "str | None" = None
    kind: str = NUMERIC
    normalize: bool = True
    metric: "str | None" = None


class DiscRequest(BaseModel):
    r: float
    algorithm: str = "greedy_disc[grey]"


class ZoomRequest(BaseModel):
    r_prime: float
    variant: "str | None" = None
    focus: "int | None" = None


class _DatasetRecord:
    def __init__(self, ds: Dataset, metric):
        self.ds = ds
        self.metric = metric
        self.lock = threading.Lock()
        self._tree = None

    def tree(self):
        if self._tree is None:
            self._tree = mtree.build(self.ds, mtree.MTreeConfig(), self.metric)
        return self._tree


class Store:
    def __init__(self, max_points: int, persist_path: "Path | None"):
        self.max_points = max_points
        self.persist_path = persist_path
        self.datasets: dict = {}
        self.solutions: dict = {}
        if persist_path and persist_path.exists():
            self._load()

    # -- persistence (JSON snapshots; best-effort, small sessions) ---------

    def _load(self):
        payload = json.loads(self.persist_path.read_text(encoding="utf-8"))
        for rec in payload.get("datasets", []):
            ds = Dataset(rec["kind"], np.asarray(rec["ids"], dtype=np.int64),
                         np.asarray(rec["coords"], dtype=np.float64),
                         rec.get("vocab"))
            self.datasets[rec["id"]] = _DatasetRecord(ds, get_metric(rec["metric"]))
        for rec in payload.get("solutions", []):
            self.solutions[rec["id"]] = rec

    def save(self):
        if not self.persist_path:
            return
        payload = {
            "datasets": [
                {
                    "id": did,
                    "kind": rec.ds.kind,
                    "ids": rec.ds.ids.tolist(),
                    "coords": rec.ds.coords.tolist(),
                    "vocab": rec.ds.vocab,
                    "metric": rec.metric.name,
                }
                for did, rec in self.datasets.items()
            ],
            "solutions": list(self.solutions.values()),
        }
        self.persist_path.write_text(json.dumps(payload), encoding="utf-8")


def _dataset_summary(did: str, rec: _DatasetRecord) -> dict:
    return {
        "id": did,
        "n": len(rec.ds),
        "d": rec.ds.dim,
        "kind": rec.ds.kind,
        "metric": rec.metric.name,
        "extent": rec.ds.extent(),
    }


def create_app(max_points: "int | None" = None,
               persist_path: "str | None" = None) -> FastAPI:
    max_points = max_points or int(os.environ.get("DISCDIV_MAX_POINTS", DEFAULT_MAX_POINTS))
    persist = persist_path or os.environ.get("DISCDIV_PERSIST")
    store = Store(max_points, Path(persist) if persist else None)
    app = FastAPI(title="discdiv", version="0.1.0")
    app.state.store = store

    def _dataset_or_404(dataset_id: str) -> _DatasetRecord:
        rec = store.datasets.get(dataset_id)
        if rec is None:
            raise HTTPException(404, f"unknown dataset {dataset_id}")
        return rec

    def _solution_or_404(solution_id: str) -> dict:
        rec = store.solutions.get(solution_id)
        if rec is None:
            raise HTTPException(404, f"unknown solution {solution_id}")
        return rec

    @app.post("/datasets")
    def create_dataset(req: DatasetRequest):
        if (req.generate is None) == (req.csv is None):
            raise HTTPException(400, "provide exactly one of 'generate' or 'csv'")
        try:
            if req.generate is not None:
                spec = req.generate
                if spec.n > max_points:
                    raise HTTPException(413, f"n exceeds the limit of {max_points}")
                ds = data_mod.make_dataset(spec.model_dump())
            else:
                ds = data_mod.loads_csv(req.csv, req.kind, req.normalize)
        except HTTPException:
            raise
        except (ValueError, KeyError) as exc:
            raise HTTPException(400, str(exc))
        if len(ds) > max_points:
            raise HTTPException(413, f"dataset exceeds the limit of {max_points}")
        metric = get_metric(req.metric) if req.metric else ds.default_metric()
        if metric.kind != ds.kind:
            raise HTTPException(400, f"{metric.name} metric does not fit {ds.kind} data")
        did = uuid.uuid4().hex
        store.datasets[did] = _DatasetRecord(ds, metric)
        store.save()
        return _dataset_summary(did, store.datasets[did])

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str, include_points: bool = Query(False)):
        rec = _dataset_or_404(dataset_id)
        out = _dataset_summary(dataset_id, rec)
        if include_points:
            out["ids"] = rec.ds.ids.tolist()
            if rec.ds.kind == NUMERIC:
                out["coords"] = rec.ds.coords.tolist()
            else:
                out["labels"] = [[rec.ds.vocab[j][int(c)] for j, c in enumerate(row)]
                                 for row in rec.ds.coords]
        return out

    def _store_solution(dataset_id: str, rec: _DatasetRecord, sub: DiverseSubset) -> dict:
        checks = verify(rec.ds, sub, sub.radius, rec.metric)
        if sub.algorithm.startswith("local_"):
            # only the focus neighborhood was re-solved; judge the local result
            local = sub.metadata.get("local_verify", {})
            ok = local.get("coverage") and local.get("independence")
        else:
            needs_independence = sub.algorithm not in COVERAGE_ONLY
            ok = checks["coverage"] and (checks["independence"] or not needs_independence)
        if not ok:
            raise HTTPException(500, f"{sub.algorithm} produced an invalid subset")
        sid = uuid.uuid4().hex
        record = {
            "id": sid,
            "dataset_id": dataset_id,
            "radius": sub.radius,
            "algorithm": sub.algorithm,
            "ids": [int(i) for i in sub.ids],
            "access_cost": int(sub.access_cost),
            "wall_time_s": sub.wall_time_s,
            "metadata": sub.metadata,
            "verify": checks,
        }
        store.solutions[sid] = record
        store.save()
        return record

    @app.post("/datasets/{dataset_id}/disc")
    def solve(dataset_id: str, req: DiscRequest):
        rec = _dataset_or_404(dataset_id)
        if req.algorithm not in SOLVERS:
            raise HTTPException(422, f"unknown algorithm {req.algorithm!r}")
        if not req.r > 0:
            raise HTTPException(422, "radius must be positive")
        if not rec.lock.acquire(blocking=False):
            raise HTTPException(409, "another operation is mutating this dataset")
        try:
            sub = SOLVERS[req.algorithm](rec.tree(), req.r)
            record = _store_solution(dataset_id, rec, sub)
        finally:
            rec.lock.release()
        return {k: record[k] for k in ("id", "dataset_id", "radius", "algorithm",
                                       "ids", "access_cost", "verify")} | {
            "size": len(record["ids"])}

    @app.post("/solutions/{solution_id}/zoom")
    def zoom(solution_id: str, req: ZoomRequest):
        sol = _solution_or_404(solution_id)
        rec = _dataset_or_404(sol["dataset_id"])
        r = sol["radius"]
        r_new = req.r_prime
        if r_new == r or r_new <= 0:
            raise HTTPException(422, "r_prime must be positive and differ from the solution radius")
        zoom_dir_in = r_new < r
        variant = req.variant or ("greedy" if zoom_dir_in else "greedy_a")
        if zoom_dir_in and variant not in ZOOM_IN_VARIANTS:
            raise HTTPException(422, f"zoom-in variant must be one of {sorted(ZOOM_IN_VARIANTS)}")
        if not zoom_dir_in and variant not in ZOOM_OUT_VARIANTS:
            raise HTTPException(422, f"zoom-out variant must be one of {sorted(ZOOM_OUT_VARIANTS)}")
        base = DiverseSubset(radius=r, ids=list(sol["ids"]), algorithm=sol["algorithm"])
        if req.focus is not None and req.focus not in base.ids:
            raise HTTPException(422, f"focus {req.focus} is not part of the solution")
        if not rec.lock.acquire(blocking=False):
            raise HTTPException(409, "another operation is mutating this dataset")
        try:
            tree = rec.tree()
            if req.focus is not None:
                sub = local_zoom(tree, base, r, req.focus, r_new,
                                 greedy=variant == "greedy",
                                 out_variant=variant if variant in ZOOM_OUT_VARIANTS else "plain")
            elif zoom_dir_in:
                sub = zoom_in(tree, base, r, r_new, greedy=variant == "greedy")
            else:
                sub = zoom_out(tree, base, r, r_new, variant=variant)
            record = _store_solution(sol["dataset_id"], rec, sub)
        finally:
            rec.lock.release()
        return {
            "id": record["id"],
            "dataset_id": record["dataset_id"],
            "base_id": solution_id,
            "radius": record["radius"],
            "algorithm": record["algorithm"],
            "ids": record["ids"],
            "size": len(record["ids"]),
            "access_cost": record["access_cost"],
            "diff": zoom_diff(base.ids, record["ids"]),
            "metadata": record["metadata"],
        }

    @app.get("/solutions/{solution_id}")
    def get_solution(solution_id: str, reference: "str | None" = Query(None)):
        sol = _solution_or_404(solution_id)
        rec = _dataset_or_404(sol["dataset_id"])
        ref_ids = None
        if reference is not None:
            ref = _solution_or_404(reference)
            ref_ids = ref["ids"]
        report = quality(rec.ds, sol["ids"], sol["radius"], rec.metric, reference=ref_ids)
        payload = dict(sol)
        payload["size"] = len(sol["ids"])
        # infinities (e.g. f_min of a singleton) are not valid JSON
        payload["quality"] = {k: (None if isinstance(v, float) and not np.isfinite(v) else v)
                              for k, v in report.to_dict().items()}
        if reference is None:
            payload["quality"].pop("jaccard", None)
        else:
            payload["quality"]["jaccard_to"] = reference
        return payload

    static_dir = os.environ.get("DISCDIV_STATIC")
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


app = create_app()
