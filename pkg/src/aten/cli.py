"""Command-line entry point: ``aten {gen,validate,expand,query,bench,fixtures}``.

Exit codes: 0 ok, 1 invalid input / unknown station / failed assertion,
2 expansion count mismatch (and argparse usage errors), 3 unreachable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ingest
from .bench import DEFAULT_GROUPS, DEFAULT_TIMING_GROUPS, BenchPlan, emit_report, run_bench, run_sweep
from .expansion import ATEN, METHOD3, MODES, PSEUDOCODE, STYLES, build, predict_expansion_size
from .model import Direction, InvalidNetwork, NetworkError, UnknownStation, validate
from .solvers import METHODS, Unreachable, run_method


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _methods(text: str) -> tuple[str, ...]:
    out = tuple(x for x in text.split(",") if x)
    bad = [m for m in out if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    return out


def _param(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k, v


def _write(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return ingest.read_network(path)
    except (InvalidNetwork, ingest.SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_gen(args) -> int:
    params = ingest.preset(args.preset, args.seed)
    if args.param:
        overrides = params.to_dict()
        for k, v in args.param:
            if k not in overrides or k == "seed":
                print(f"error: unknown generator parameter {k!r}", file=sys.stderr)
                return 1
            overrides[k] = json.loads(v)
        params = ingest.params_from_dict(overrides)
    try:
        net = ingest.generate(params)
    except ingest.GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(ingest.dumps(net), args.output)
    return 0


def cmd_validate(args) -> int:
    try:
        net = ingest.read_network(args.input, check=False)
    except ingest.SchemaError as exc:
        print(f"schema error: {exc}")
        return 1
    report = validate(net)
    if report.ok:
        print(f"ok: {len(net.stations)} stations, {len(net.lines)} lines, {len(net.transfers)} transfer stations")
        return 0
    for f in report:
        print(f)
    return 1


def cmd_expand(args) -> int:
    net = _load(args.input)
    if net is None:
        return 1
    x = build(net, args.mode, args.style)
    predicted = predict_expansion_size(net, args.mode, args.style)
    n0, e0 = len(net.stations), len(net.arcs())
    print(f"original: {n0} nodes, {e0} directed edges")
    print(f"{args.mode}: {x.node_count} nodes (+{x.node_count - n0} nodes), {x.edge_count} directed edges")
    kinds = x.counts_by_kind()
    print("edges by kind: " + ", ".join(f"{k} {v}" for k, v in kinds.items()))
    print(f"predicted: {predicted[0]} nodes, {predicted[1]} directed edges")
    if args.output:
        Path(args.output).write_text(x.dumps(), encoding="utf-8")
    if predicted != (x.node_count, x.edge_count):
        print("error: expansion size does not match the closed-form prediction", file=sys.stderr)
        return 2
    return 0


def _dir(d) -> str:
    return Direction(d).name.lower()


def cmd_query(args) -> int:
    net = _load(args.input)
    if net is None:
        return 1
    try:
        s = net.resolve(args.origin)
        e = net.resolve(args.destination)
    except NetworkError as exc:
        print(f"error: unknown or ambiguous station: {exc}", file=sys.stderr)
        return 1
    graphs = {}
    if args.method == "proposed":
        graphs[ATEN] = build(net, ATEN, args.style)
    elif args.method == "method3":
        graphs[METHOD3] = build(net, METHOD3)
    try:
        r = run_method(args.method, net, graphs, s, e)
    except Unreachable as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return 3
    if args.json:
        d = r.to_dict(include_timing=False)
        print(json.dumps(d, indent=1, sort_keys=True))
        return 0
    name = lambda sid: net.stations[sid].name  # noqa: E731
    print(f"{r.method}: {name(s)} -> {name(e)}")
    for k, leg in enumerate(r.legs):
        if k > 0:
            t = r.transfers[k - 1]
            print(
                f"  transfer at {name(t.station)}: line {t.from_line} {_dir(t.from_dir)} -> "
                f"line {t.to_line} {_dir(t.to_dir)}  {t.seconds}s"
            )
        stops = " -> ".join(name(x) for x in leg.stations)
        print(f"  ride line {leg.line} ({_dir(leg.direction)}) {stops}  {leg.seconds}s")
    if not r.feasible:
        print("  warning: itinerary walks an in-vehicle through edge (infeasible)")
    print(f"total {r.total_seconds}s")
    print(f"settled {r.stats.settled_count}, relaxed {r.stats.relax_count}")
    return 0


def cmd_bench(args) -> int:
    if args.networks:
        preset = args.preset or "small"
        rep = run_sweep(preset, args.networks, args.seed, args.methods, oracle=args.oracle)
        text = json.dumps(rep.to_dict(), indent=1, sort_keys=True) + "\n"
        _write(text, args.output)
        if args.output:
            print(f"{rep.od_pairs} OD pairs over {rep.networks} networks; violations {rep.violations}")
        return 0 if rep.passed else 1
    if args.input:
        plan = BenchPlan(path=args.input)
    else:
        plan = BenchPlan(params=ingest.preset(args.preset or "beijing_scale", args.seed))
    plan.methods = args.methods
    plan.od_groups = args.groups
    plan.timing_groups = args.timing_groups
    plan.seed = args.seed
    plan.repetitions = args.repetitions
    plan.workers = args.workers
    try:
        report = run_bench(plan)
    except (ValueError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(emit_report(report, args.format, timing=not args.no_timing), args.output)
    if args.output:
        sys.stdout.write(emit_report(report, "table", timing=not args.no_timing))
    return 0 if report.passed else 1


def cmd_fixtures(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in sorted(ingest.FIXTURES.items()):
        path = out / f"{name}.json"
        ingest.write_network(make(), path)
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aten", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic network")
    g.add_argument("--preset", choices=ingest.PRESETS, default="medium", help="parameter preset")
    g.add_argument("--seed", type=int, default=0, help="random seed (the only entropy source)")
    g.add_argument("--param", type=_param, action="append", metavar="KEY=JSON", help="override one generator parameter")
    g.add_argument("-o", "--output", help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="check a network file")
    v.add_argument("input", help="network file")
    v.set_defaults(func=cmd_validate)

    x = sub.add_parser("expand", help="build an expanded graph and cross-check its size")
    x.add_argument("input", help="network file")
    x.add_argument("--mode", choices=MODES, default=ATEN, help="expansion rule")
    x.add_argument("--style", choices=STYLES, default=PSEUDOCODE, help="same-position line expansion (aten only)")
    x.add_argument("-o", "--output", help="write the expanded graph here")
    x.set_defaults(func=cmd_expand)

    q = sub.add_parser("query", help="shortest route between two stations")
    q.add_argument("input", help="network file")
    q.add_argument("origin", help="station id or unique name")
    q.add_argument("destination", help="station id or unique name")
    q.add_argument("--method", choices=METHODS, default="proposed", help="solver")
    q.add_argument("--style", choices=STYLES, default=PSEUDOCODE, help="expansion style for the proposed solver")
    q.add_argument("--json", action="store_true", help="machine-readable output")
    q.set_defaults(func=cmd_query)

    b = sub.add_parser("bench", help="compare the four methods")
    src = b.add_mutually_exclusive_group()
    src.add_argument("--input", help="network file")
    src.add_argument("--preset", choices=ingest.PRESETS, help="generate from a preset (default beijing_scale)")
    b.add_argument("--seed", type=int, default=0, help="seed for generation and OD sampling")
    b.add_argument("--methods", type=_methods, default=METHODS, help="comma-separated subset of methods")
    b.add_argument("--groups", type=_ints, default=DEFAULT_GROUPS, help="OD group sizes for sums and objects")
    b.add_argument("--timing-groups", type=_ints, default=DEFAULT_TIMING_GROUPS, help="OD group sizes for runtimes")
    b.add_argument("--repetitions", type=int, default=5, help="timing repetitions per point (median reported)")
    b.add_argument("--workers", type=int, default=1, help="threads for the sums/objects pass")
    b.add_argument("--format", choices=("table", "machine"), default="table", help="report format")
    b.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the report")
    b.add_argument("--networks", type=int, default=0, help="sweep every OD pair of this many generated networks instead")
    b.add_argument("--no-oracle", dest="oracle", action="store_false", help="skip brute force in a sweep")
    b.add_argument("-o", "--output", help="report file (default stdout)")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fixtures", help="write the fixture networks as files")
    f.add_argument("-o", "--output-dir", default=".", help="directory for the fixture files")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownStation as exc:
        print(f"error: unknown station {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
