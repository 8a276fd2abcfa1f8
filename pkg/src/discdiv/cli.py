"""Command-line interface: gen, index, disc, zoom, bench, report, serve."""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from . import data as data_mod
from . import mtree
from .disc import DiverseSubset, basic_disc, fast_c, greedy_c, greedy_disc, verify
from .metrics import get_metric
from .zoom import local_zoom, zoom_diff, zoom_in, zoom_out

ALGORITHMS = ["basic_disc", "greedy_disc[grey]", "greedy_disc[white]",
              "greedy_disc[lazy_grey]", "greedy_disc[lazy_white]", "greedy_c", "fast_c"]


def _add_data_args(p):
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--kind", default="numeric", choices=["numeric", "categorical"])
    p.add_argument("--no-normalize", action="store_true",
                   help="skip per-dimension min-max normalization of numeric data")
    p.add_argument("--metric", default=None,
                   choices=["euclidean", "manhattan", "hamming"],
                   help="default: euclidean for numeric, hamming for categorical")


def _add_tree_args(p):
    p.add_argument("--capacity", type=int, default=50)
    p.add_argument("--promote", default="min_overlap",
                   choices=["min_overlap", "max_distance", "random"])
    p.add_argument("--partition", default="closest_pivot",
                   choices=["closest_pivot", "balanced"])
    p.add_argument("--tree-seed", type=int, default=0)
    p.add_argument("--count-radius", type=float, default=None,
                   help="pre-count neighborhood sizes at this radius while building")


def _load(args):
    ds = data_mod.load_csv(args.data, args.kind, normalize=not args.no_normalize)
    metric = get_metric(args.metric) if args.metric else ds.default_metric()
    return ds, metric


def _build_tree(ds, metric, args):
    cfg = mtree.MTreeConfig(
        node_capacity=args.capacity,
        split_policy=mtree.SplitPolicy(args.promote, args.partition),
        count_neighborhoods_at_build=args.count_radius is not None,
        build_radius=args.count_radius or 0.0,
        seed=args.tree_seed,
    )
    return mtree.build(ds, cfg, metric)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_gen(args):
    if args.type == "uniform":
        ds = data_mod.gen_uniform(args.n, args.d, args.seed)
    else:
        ds = data_mod.gen_clustered(args.n, args.d, args.n_clusters, args.seed)
    data_mod.save_csv(ds, args.out)
    print(f"wrote {len(ds)} points ({args.type}, d={ds.dim}, seed={args.seed}) to {args.out}")


def cmd_index(args):
    ds, metric = _load(args)
    tree = _build_tree(ds, metric, args)
    stats = tree.stats(with_fat_factor=not args.no_fat_factor)
    stats["metric"] = metric.name
    _write_json(args.out, stats)


def cmd_disc(args):
    ds, metric = _load(args)
    tree = _build_tree(ds, metric, args)
    name = args.algorithm
    pruned = not args.no_pruning
    if name == "basic_disc":
        sub = basic_disc(tree, args.r, pruned=pruned)
    elif name.startswith("greedy_disc["):
        sub = greedy_disc(tree, args.r, variant=name[len("greedy_disc["):-1],
                          pruned=pruned, init=args.count_init)
    elif name == "greedy_c":
        sub = greedy_c(tree, args.r, init=args.count_init)
    else:
        sub = fast_c(tree, args.r, init=args.count_init)
    payload = sub.to_dict()
    payload["verify"] = verify(ds, sub, args.r, metric)
    _write_json(args.out, payload)


def cmd_zoom(args):
    ds, metric = _load(args)
    tree = _build_tree(ds, metric, args)
    with open(args.base, encoding="utf-8") as fh:
        base_payload = json.load(fh)
    base = DiverseSubset(radius=base_payload["radius"], ids=base_payload["ids"],
                         algorithm=base_payload.get("algorithm", "base"))
    r = base.radius
    if args.focus is not None:
        sub = local_zoom(tree, base, r, args.focus, args.r_new,
                         greedy=args.variant == "greedy", out_variant=args.variant
                         if args.variant.startswith("greedy_") else "plain")
    elif args.r_new < r:
        sub = zoom_in(tree, base, r, args.r_new, greedy=args.variant == "greedy")
    else:
        variant = args.variant if args.variant != "greedy" else "greedy_a"
        sub = zoom_out(tree, base, r, args.r_new, variant=variant)
    payload = sub.to_dict()
    payload["diff"] = zoom_diff(base.ids, sub.ids)
    payload["verify"] = verify(ds, sub, args.r_new, metric)
    _write_json(args.out, payload)


def cmd_bench(args):
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    columns, rows = bench_mod.SUITES[args.suite](config)
    bench_mod.write_csv(args.out, columns, rows)
    print(f"wrote {len(rows)} rows to {args.out}")


def cmd_report(args):
    columns, rows = bench_mod.read_csv(args.input)
    group_by = args.group_by.split(",")
    values = args.values.split(",")
    out_cols, out_rows = bench_mod.aggregate_rows(rows, group_by, values)
    bench_mod.write_csv(args.out, out_cols, out_rows)
    print(f"wrote {len(out_rows)} aggregated rows to {args.out}")


def cmd_serve(args):
    import os

    import uvicorn

    from .service import create_app

    host, port = args.host, args.port
    if host is None or port is None:
        bind = os.environ.get("DISCDIV_BIND", "127.0.0.1:8237")
        env_host, _, env_port = bind.rpartition(":")
        host = host or env_host or "127.0.0.1"
        port = port if port is not None else int(env_port)
    uvicorn.run(create_app(), host=host, port=port)


def build_parser():
    parser = argparse.ArgumentParser(prog="discdiv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset CSV")
    p.add_argument("--type", default="uniform", choices=["uniform", "clustered"])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n-clusters", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("index", help="build the metric tree and dump its statistics")
    _add_data_args(p)
    _add_tree_args(p)
    p.add_argument("--no-fat-factor", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("disc", help="compute a covering/dissimilar subset")
    _add_data_args(p)
    _add_tree_args(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--algorithm", default="greedy_disc[grey]", choices=ALGORITHMS)
    p.add_argument("--no-pruning", action="store_true")
    p.add_argument("--count-init", default="query", choices=["query", "scan", "build"])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("zoom", help="adapt a stored solution to a new radius")
    _add_data_args(p)
    _add_tree_args(p)
    p.add_argument("--base", required=True, help="solution JSON from the disc command")
    p.add_argument("--r-new", type=float, required=True)
    p.add_argument("--variant", default="plain",
                   choices=["plain", "greedy", "greedy_a", "greedy_b", "greedy_c"])
    p.add_argument("--focus", type=int, default=None, help="object id for local zooming")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_zoom)

    p = sub.add_parser("bench", help="run an experiment suite from a JSON config")
    p.add_argument("--suite", required=True, choices=sorted(bench_mod.SUITES))
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="aggregate a bench CSV into plot-ready data")
    p.add_argument("--input", required=True)
    p.add_argument("--group-by", required=True, help="comma-separated column names")
    p.add_argument("--values", required=True, help="comma-separated numeric columns")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP facade")
    p.add_argument("--host", default=None, help="default from DISCDIV_BIND")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
