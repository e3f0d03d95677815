"""Command-line entry points.

Each subcommand writes its artifacts (JSON / CSV / SVG) to explicit path
flags and prints a one-line JSON summary to stdout. Runtime failures print a
machine-readable {"error": ...} line to stderr and exit 1; usage errors exit
2 via argparse.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .actualization import (
    act_failure_experiment,
    act_statistics,
    failure_report_to_json,
    sample_act,
    statistics_to_json,
)
from .angles import setting_from_indices
from .bell import bell_terms, bell_to_json
from .branching import (
    distribution_to_json,
    most_common_r,
    simulate_sequences,
    typical_window,
    typicality_fraction,
)
from .geometry import (
    GridSpec,
    cross_section_arcs,
    diamond_partition,
    grid_partition,
    partition_to_json,
)
from .models import canonical_model
from .report import render_bell, render_branch, render_cross_section, render_curves
from .service import serve
from .trials import analyze, export_log, load_log, run_trials

import numpy as np


def _write_json(path: str | Path, doc: dict) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return str(path)


def _summary(**written) -> None:
    print(json.dumps({k: v for k, v in written.items() if v is not None},
                     sort_keys=True))


def _cmd_curves(args) -> int:
    models = [canonical_model(m) for m in args.models.split(",")] if args.models else []
    render_curves(args.csv, svg_path=args.svg, models=models, points=args.points)
    _summary(csv=args.csv, svg=args.svg)
    return 0


def _cmd_bell(args) -> int:
    report = bell_terms(args.model)
    doc = bell_to_json(report)
    written = {}
    if args.json:
        written["json"] = _write_json(args.json, doc)
    if args.svg:
        render_bell(report, args.svg, csv_path=args.csv)
        written["svg"] = args.svg
        written["csv"] = args.csv
    print(json.dumps(doc, sort_keys=True))
    return 0


def _partition_from_args(args):
    if args.kind == "arcs":
        base = args.delta if args.delta is not None else setting_from_indices(
            args.a, args.b, strict=not args.free)
        return cross_section_arcs(base)
    if args.kind == "diamonds":
        base = args.delta if args.delta is not None else setting_from_indices(
            args.a, args.b, strict=not args.free)
        return diamond_partition(base, args.s)
    raise ValueError(f"unknown partition kind {args.kind!r}")


def _cmd_partition(args) -> int:
    part = _partition_from_args(args)
    written = {}
    if args.json:
        written["json"] = _write_json(args.json, partition_to_json(part))
    if args.svg:
        render_cross_section(part, args.svg, csv_path=args.csv)
        written["svg"] = args.svg
        written["csv"] = args.csv
    _summary(kind=part.kind, delta=part.delta, counts=part.counts, **written)
    return 0


def _cmd_grid(args) -> int:
    part = grid_partition(GridSpec(M=args.m_total, m=args.m))
    written = {}
    if args.json:
        written["json"] = _write_json(args.json, partition_to_json(part))
    if args.svg:
        render_cross_section(part, args.svg, csv_path=args.csv)
        written["svg"] = args.svg
        written["csv"] = args.csv
    _summary(kind=part.kind, delta=part.delta, counts=part.counts, **written)
    return 0


def _cmd_branch(args) -> int:
    dist = simulate_sequences(args.i, args.ne, args.nu,
                              samples=args.samples, seed=args.seed)
    doc = distribution_to_json(dist)
    if args.window:
        window = tuple(int(r) for r in args.window.split(","))
    elif args.window_size:
        window = typical_window(args.i, args.ne, args.nu, args.window_size)
    else:
        window = None
    if window is not None:
        frac = typicality_fraction(args.i, args.ne, args.nu, window)
        doc["window"] = {
            "r_values": list(window),
            "fraction": float(frac),
            "fraction_exact": f"{frac.numerator}/{frac.denominator}",
        }
    doc["most_common_r"] = most_common_r(args.i, args.ne, args.nu)
    written = {}
    if args.json:
        written["json"] = _write_json(args.json, doc)
    if args.svg:
        render_branch(dist, args.svg, csv_path=args.csv)
        written["svg"] = args.svg
        written["csv"] = args.csv
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_act_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    settings = [setting_from_indices(a, b)
                for a, b in ((0, 0), (3, 2), (0, 2), (3, 0))]
    if args.failure:
        mode = "angle" if args.kind == "arcs" else "point"
        pointers = [sample_act(mode, rng) for _ in range(args.pointers)]
        report = act_failure_experiment(
            pointers, settings, kind=args.kind,
            grid_m_total=args.m_total, s=args.s)
        doc = failure_report_to_json(report)
    else:
        if args.kind == "grid":
            from .geometry import grid_spec_for_delta
            setting = setting_from_indices(args.a, args.b)
            part = grid_partition(
                grid_spec_for_delta(args.m_total, setting.delta))
        else:
            ns = argparse.Namespace(kind=args.kind, a=args.a, b=args.b,
                                    s=args.s, delta=None, free=False)
            part = _partition_from_args(ns)
        stats = act_statistics(part, args.trials, seed=args.seed)
        doc = statistics_to_json(stats)
    written = {}
    if args.json:
        written["json"] = _write_json(args.json, doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_trials(args) -> int:
    log = run_trials(args.model, mode=args.mode, pairs=args.pairs,
                     seed=args.seed, s=args.s, grid_m_total=args.m_total)
    written = {}
    if args.csv:
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(args.csv).write_text(export_log(log, "csv"))
        written["csv"] = args.csv
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(export_log(log, "json"))
        written["json"] = args.json
    _summary(model=log.model, mode=log.mode, pairs=log.pairs, seed=log.seed,
             **written)
    return 0


def _cmd_analyze(args) -> int:
    log = load_log(Path(args.log).read_text())
    result = analyze(log)
    doc = {
        "schema": 1,
        "bell": bell_to_json(result.report),
        "freq": {str(d): v for d, v in result.freq.items()},
        "misses": {str(d): n for d, n in result.misses.items()},
    }
    if args.json:
        _write_json(args.json, doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    server = serve(args.port, host=args.host)
    host, port = server.server_address[:2]
    print(json.dumps({"schema": 1, "serving": f"http://{host}:{port}"}),
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprworlds",
        description="EPR model ladder: partitions, probabilities, Bell runs, exhibit service",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="probability curves over delta, CSV (+SVG)")
    p.add_argument("--models", default="classical_C,quantum_P,transition_Pstar")
    p.add_argument("--points", type=int, default=91)
    p.add_argument("--csv", required=True)
    p.add_argument("--svg")
    p.set_defaults(fn=_cmd_curves)

    p = sub.add_parser("bell", help="analytic Bell report for one model")
    p.add_argument("--model", required=True)
    p.add_argument("--json")
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_bell)

    p = sub.add_parser("partition", help="arc or diamond partition artifacts")
    p.add_argument("--kind", choices=["arcs", "diamonds"], default="arcs")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--delta", type=float, default=None,
                   help="free-mode relative angle in radians (overrides --a/--b)")
    p.add_argument("--free", action="store_true",
                   help="allow indices outside the experiment's sets")
    p.add_argument("--s", type=float, default=0.05)
    p.add_argument("--json")
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_partition)

    p = sub.add_parser("grid", help="block-grid partition artifacts")
    p.add_argument("--m-total", type=int, default=40, dest="m_total")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json")
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("branch", help="sequential-run world counting")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--ne", type=int, required=True)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--window", help="comma-separated r values")
    p.add_argument("--window-size", type=int, dest="window_size")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(fn=_cmd_branch)

    p = sub.add_parser("act-demo", help="pointer statistics / failure experiment")
    p.add_argument("--kind", choices=["arcs", "diamonds", "grid"], default="arcs")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--s", type=float, default=0.05)
    p.add_argument("--m-total", type=int, default=40, dest="m_total")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--failure", action="store_true",
                   help="run the pre-committed pointer experiment over all 4 settings")
    p.add_argument("--pointers", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_act_demo)

    p = sub.add_parser("trials", help="seeded end-to-end run, CSV/JSON log")
    p.add_argument("--model", required=True)
    p.add_argument("--mode", choices=["internal", "external_act"],
                   default="internal")
    p.add_argument("--pairs", type=int, default=800)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=float, default=0.05)
    p.add_argument("--m-total", type=int, default=40, dest="m_total")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_trials)

    p = sub.add_parser("analyze", help="Bell report from an exported JSON log")
    p.add_argument("--log", required=True)
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("serve", help="run the exhibit HTTP service")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
