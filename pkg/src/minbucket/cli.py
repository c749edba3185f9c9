"""Command line entry point: ``minbucket <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, degrees, graph, harness, triangles

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_IO = 4


def _gen_degrees(args):
    if args.model == "file":
        if not args.input:
            raise harness.ConfigError("--model file needs --in PATH")
        seq = degrees.load_degrees(args.input)
    else:
        if args.alpha is None or args.n is None:
            raise harness.ConfigError("--alpha and --n are required")
        dmax = args.dmax if args.dmax is not None else degrees.cap_sqrt_n(args.n)
        if args.model == "powerlaw":
            seq = degrees.power_law_sequence(degrees.PowerLawParams(args.alpha, args.n, dmax))
        else:
            dist = degrees.ReferenceDistribution.power_law(args.alpha, dmax)
            seq = degrees.sample_iid_degrees(dist, args.n, args.seed)
    degrees.save_degrees(seq, args.out)
    if seq.parity_adjusted:
        print("parity_adjusted=1", file=sys.stderr)


def _gen_graph(args):
    seq = degrees.load_degrees(args.degrees)
    if args.model == "ecm":
        g, tr = graph.generate_ecm(seq, args.seed)
    else:
        g, tr = graph.generate_chung_lu(seq, args.seed, fast=args.fast)
    graph.save_graph(g, args.out)
    if args.trace:
        print(f"model={tr.model}\nseed={tr.seed}\nm={seq.m}\nedges={g.edge_count}\n"
              f"multi_edges_erased={tr.multi_edges_erased}\n"
              f"self_loops_erased={tr.self_loops_erased}\nclamped_pairs={tr.clamped_pairs}")


def _triangles(args):
    g = graph.load_graph(args.graph)
    listing = args.list_out is not None
    if args.algo == "oracle":
        tri = sorted(triangles.oracle_triangles(g))
        stats = {"algorithm": "oracle", "wedges_enumerated": 0, "closed_wedges": 0,
                 "triangle_count": len(tri), "max_bucket": 0}
    else:
        if args.algo == "trivial":
            rep = triangles.trivial_enumerate(g, list_triangles=listing, limit=args.limit)
        else:
            rep = triangles.minbucket_enumerate(g, args.tie, list_triangles=listing,
                                                limit=args.limit)
        stats = rep.stats()
        tri = rep.triangles.tolist() if listing else []
        if rep.overflow:
            stats["overflow"] = True
    if listing:
        Path(args.list_out).write_text("".join(f"{a} {b} {c}\n" for a, b, c in tri),
                                       encoding="utf-8")
    text = json.dumps(stats) + "\n"
    if args.stats_out:
        Path(args.stats_out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _bounds(args):
    seq = degrees.load_degrees(args.degrees)
    tr = degrees.validate_truncation(seq)
    rep = bounds.bound_report(seq)
    sys.stdout.write(rep.as_text())
    sys.stdout.write(f"n={seq.n}\nm={seq.m}\nmax_degree={seq.max_degree}\n"
                     f"truncation_ok={int(tr.below_half_root_m)}\n")


def _limit_constant(args):
    dist = degrees.ReferenceDistribution.power_law(args.alpha, args.cap)
    try:
        c = bounds.limit_constant(dist, args.tol)
    except degrees.DivergenceError as exc:
        sys.stdout.write(f"alpha={args.alpha!r}\nlimit_constant=divergent\nreason={exc}\n")
        return
    sys.stdout.write(bounds.BoundReport(limit_constant=c, alpha=args.alpha).as_text())
    if args.cap is not None:
        sys.stdout.write(f"cap={args.cap}\n")


_EXPERIMENT_DEFAULTS = {
    "alpha": "2.4", "n_list": "1e4,1e5,1e6", "trials": "10", "tie": "consistent",
    "cap": "sqrt-n", "seed": "0", "degree_model": "iid", "fixed_degrees": "0",
    "bucket_by": "realized",
}


def _experiment_config(args) -> tuple[harness.ExperimentConfig, dict]:
    merged = dict(_EXPERIMENT_DEFAULTS)
    if args.config:
        merged.update(harness.read_config_file(args.config))
    for key in ("alpha", "n_list", "trials", "tie", "cap", "seed", "workers", "csv",
                "plot_data", "degree_model", "bucket_by", "reference_cap", "max_stubs"):
        v = getattr(args, key)
        if v is not None:
            merged[key] = v
    if args.fixed_degrees:
        merged["fixed_degrees"] = "1"
    try:
        workers = int(merged["workers"]) if "workers" in merged else harness.default_workers()
        cfg = harness.ExperimentConfig(
            alpha=float(merged["alpha"]),
            n_values=harness.parse_n_list(str(merged["n_list"])),
            trials=int(merged["trials"]),
            cap_rule=harness.parse_cap(str(merged["cap"])),
            tie_mode=str(merged["tie"]),
            degree_model=str(merged["degree_model"]).replace("-", "_"),
            master_seed=int(merged["seed"]),
            workers=workers,
            fixed_degrees=str(merged["fixed_degrees"]).lower() in ("1", "true", "yes"),
            bucket_by=str(merged["bucket_by"]),
            reference_cap=int(merged["reference_cap"]) if merged.get("reference_cap") else None,
            max_stubs=int(float(merged["max_stubs"])) if merged.get("max_stubs") else None,
        )
    except (TypeError, ValueError) as exc:
        raise harness.ConfigError(str(exc)) from exc
    return cfg, merged


def _experiment(args):
    cfg, merged = _experiment_config(args)
    try:
        result = harness.run_experiment(cfg)
    except harness.ResourceLimitError as exc:
        _write_outputs(exc.partial, merged)
        raise
    _write_outputs(result, merged)
    if not merged.get("csv"):
        sys.stdout.write(harness.csv_text(result))


def _write_outputs(result, merged):
    if merged.get("csv"):
        harness.emit_csv(result, merged["csv"])
    if merged.get("plot_data"):
        harness.emit_plot_data(result, merged["plot_data"])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minbucket",
                                description="MinBucket triangle enumeration on random graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-degrees", help="write a degree sequence file")
    s.add_argument("--model", choices=("powerlaw", "iid-powerlaw", "file"), required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--n", type=lambda x: int(float(x)))
    s.add_argument("--dmax", type=int, help="degree cap (default floor(sqrt(n)))")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--in", dest="input", help="input degree file for --model file")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_gen_degrees)

    s = sub.add_parser("gen-graph", help="realize a simple graph from a degree file")
    s.add_argument("--model", choices=("ecm", "chung-lu"), required=True)
    s.add_argument("--degrees", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--trace", action="store_true", help="print erasure/clamp counts")
    s.add_argument("--fast", action="store_true", help="edge-skipping Chung-Lu")
    s.set_defaults(func=_gen_graph)

    s = sub.add_parser("triangles", help="enumerate triangles of an edge-list graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--algo", choices=("trivial", "minbucket", "oracle"), default="minbucket")
    s.add_argument("--tie", choices=triangles.TIE_MODES, default="consistent")
    s.add_argument("--list-out")
    s.add_argument("--stats-out")
    s.add_argument("--limit", type=int, help="max triangles to list")
    s.set_defaults(func=_triangles)

    s = sub.add_parser("bounds", help="bound expressions for a degree file")
    s.add_argument("--degrees", required=True)
    s.set_defaults(func=_bounds)

    s = sub.add_parser("limit-constant", help="limit constant of a power law")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--cap", type=int, help="truncate the power law to {1..cap}")
    s.set_defaults(func=_limit_constant)

    s = sub.add_parser("experiment", help="Monte Carlo MinBucket work on ECM graphs")
    s.add_argument("--config", help="key=value file; flags override it")
    s.add_argument("--alpha")
    s.add_argument("--n-list")
    s.add_argument("--trials")
    s.add_argument("--tie", choices=triangles.TIE_MODES)
    s.add_argument("--cap", help="sqrt-n, sqrt-n-over-log2, or an integer")
    s.add_argument("--seed")
    s.add_argument("--workers", help=f"default from ${harness.WORKERS_ENV} or 1")
    s.add_argument("--csv")
    s.add_argument("--plot-data")
    s.add_argument("--degree-model", choices=("iid", "deterministic-powerlaw"))
    s.add_argument("--fixed-degrees", action="store_true")
    s.add_argument("--bucket-by", choices=("realized", "target"))
    s.add_argument("--reference-cap")
    s.add_argument("--max-stubs")
    s.set_defaults(func=_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except harness.ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (harness.ConfigError, degrees.DegreeError, graph.GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
