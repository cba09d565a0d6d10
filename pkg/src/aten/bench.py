"""Comparative benchmark: OD groups, travel-time sums, traversed objects, runtimes."""

from __future__ import annotations

import hashlib
import json
import os
import platform
import random
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .expansion import ATEN, METHOD3, build_aten, build_method3
from .ingest import GenParams, generate, preset, read_network
from .model import NetworkError, TransitNetwork
from .solvers import METHODS, brute_force_from, run_method

DEFAULT_GROUPS = (50, 100, 150, 200, 250)
DEFAULT_TIMING_GROUPS = (30, 60, 90, 120, 150)
REPORT_SCHEMA = "aten-bench/1"
SETTLED_BAND = 0.10


class BenchError(NetworkError):
    def __init__(self, method, od, cause):
        self.method = method
        self.od = od
        super().__init__(f"{method} failed on OD {od}: {cause}")


def sample_ods(net: TransitNetwork, n: int, seed: int) -> list[tuple[int, int]]:
    """``n`` distinct ordered pairs of distinct stations, uniform, seeded."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ids = sorted(net.stations)
    m = len(ids)
    total = m * (m - 1)
    if n > total:
        raise ValueError(f"{n} OD pairs requested but the network has only {total}")
    out = []
    for k in random.Random(seed).sample(range(total), n):
        i, j = divmod(k, m - 1)
        out.append((ids[i], ids[j + (j >= i)]))
    return out


def od_checksum(ods) -> str:
    return hashlib.sha256(";".join(f"{s}-{e}" for s, e in ods).encode()).hexdigest()[:16]


@dataclass
class BenchPlan:
    network: TransitNetwork | None = None
    params: GenParams | None = None
    path: str | None = None
    methods: tuple[str, ...] = METHODS
    od_groups: tuple[int, ...] = DEFAULT_GROUPS
    timing_groups: tuple[int, ...] = DEFAULT_TIMING_GROUPS
    seed: int = 0
    repetitions: int = 5
    workers: int = 1
    ods: list[tuple[int, int]] | None = None

    def check(self):
        for name in ("od_groups", "timing_groups"):
            g = list(getattr(self, name))
            if any(x <= 0 for x in g) or g != sorted(set(g)):
                raise ValueError(f"{name} must be positive and strictly ascending, got {g}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")

    def resolve_network(self) -> tuple[TransitNetwork, str]:
        if self.network is not None:
            return self.network, "in-memory"
        if self.path is not None:
            return read_network(self.path), f"file:{os.path.basename(self.path)}"
        if self.params is not None:
            return generate(self.params), f"generated:seed={self.params.seed}"
        raise ValueError("plan has no network source")


@dataclass
class BenchReport:
    source: str
    network: dict
    topologies: dict
    methods: list
    od_groups: list
    timing_groups: list
    seed: int
    repetitions: int
    rows: list = field(default_factory=list)
    timings: list = field(default_factory=list)
    od_checksums: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    runtime_ordering: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a["passed"] for a in self.assertions)

    def sums(self, method: str) -> list[int]:
        return [r["travel_time_sum"] for r in self.rows if r["method"] == method]

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["schema"] = REPORT_SCHEMA
        if not timing:
            d.pop("timings")
            d.pop("runtime_ordering")
            d.pop("environment")
            d["topologies"] = {k: {kk: vv for kk, vv in v.items() if kk != "build_nanos"} for k, v in d["topologies"].items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BenchReport":
        d = dict(d)
        if d.pop("schema", REPORT_SCHEMA) != REPORT_SCHEMA:
            raise ValueError("not a bench report")
        return cls(**d)


def _run_group(method, net, graphs, ods, workers):
    def one(od):
        try:
            r = run_method(method, net, graphs, od[0], od[1])
        except Exception as exc:
            raise BenchError(method, od, exc) from exc
        return r.total_seconds, r.stats.settled_count, r.stats.relax_count

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, ods))
    return [one(od) for od in ods]


def _check(name, passed, detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _assertions(report: BenchReport) -> list[dict]:
    present = set(report.methods)
    out = []
    by = {(r["method"], r["ods"]): r for r in report.rows}
    groups = report.od_groups

    def col(method, key):
        return [by[(method, g)][key] for g in groups]

    if {"proposed", "method2"} <= present:
        a, b = col("proposed", "travel_time_sum"), col("method2", "travel_time_sum")
        out.append(_check("sum_proposed == sum_method2", a == b, f"{a} vs {b}"))
    if {"method1", "method2"} <= present:
        a, b = col("method1", "travel_time_sum"), col("method2", "travel_time_sum")
        out.append(_check("sum_method1 >= sum_method2", all(x >= y for x, y in zip(a, b)), f"{a} vs {b}"))
    if {"method3", "method2"} <= present:
        a, b = col("method3", "travel_time_sum"), col("method2", "travel_time_sum")
        out.append(_check("sum_method3 <= sum_method2", all(x <= y for x, y in zip(a, b)), f"{a} vs {b}"))
    if "method2" in present and len(present) > 1:
        ok = all(
            by[("method2", g)]["settled_sum"] >= max(by[(m, g)]["settled_sum"] for m in present) for g in groups
        )
        out.append(_check("settled: method2 largest", ok, str(col("method2", "settled_sum"))))
    if "method1" in present and len(present) > 1:
        ok = all(
            by[("method1", g)]["settled_sum"] <= min(by[(m, g)]["settled_sum"] for m in present) for g in groups
        )
        out.append(_check("settled: method1 smallest", ok, str(col("method1", "settled_sum"))))
    if {"method3", "proposed"} <= present:
        a, b = col("method3", "settled_sum"), col("proposed", "settled_sum")
        ok = all(abs(x - y) <= SETTLED_BAND * max(x, y) for x, y in zip(a, b))
        out.append(
            _check(
                "settled: method3 ~ proposed (10% band, chosen proxy)",
                ok,
                f"{a} vs {b}",
            )
        )
    return out


def run_bench(plan: BenchPlan) -> BenchReport:
    plan.check()
    net, source = plan.resolve_network()
    graphs = {}
    topologies = {
        "original": {"nodes": len(net.stations), "edges": len(net.arcs())},
    }
    needed = {"proposed": ATEN, "method3": METHOD3}
    for method, mode in needed.items():
        if method in plan.methods:
            t0 = time.perf_counter_ns()
            graphs[mode] = build_aten(net) if mode == ATEN else build_method3(net)
            topologies[mode] = {
                "nodes": graphs[mode].node_count,
                "edges": graphs[mode].edge_count,
                "build_nanos": time.perf_counter_ns() - t0,
            }

    groups = list(plan.od_groups)
    timing_groups = list(plan.timing_groups)
    if plan.ods is not None:
        ods = list(plan.ods)
        if max(groups + timing_groups) > len(ods):
            raise ValueError("explicit OD list is shorter than the largest group")
    else:
        ods = sample_ods(net, max(groups + timing_groups), plan.seed)

    report = BenchReport(
        source=source,
        network={
            "stations": len(net.stations),
            "transfer_stations": len(net.transfers),
            "lines": len(net.lines),
            "directed_run_edges": len(net.arcs()),
        },
        topologies=topologies,
        methods=list(plan.methods),
        od_groups=groups,
        timing_groups=timing_groups,
        seed=plan.seed,
        repetitions=plan.repetitions,
        od_checksums={str(g): od_checksum(ods[:g]) for g in sorted(set(groups + timing_groups))},
        environment={
            "python": sys.version.split()[0],
            "platform": platform.platform(),
            "cpus": os.cpu_count(),
        },
    )
    for method in plan.methods:
        results = _run_group(method, net, graphs, ods[: groups[-1]], plan.workers)
        for g in groups:
            part = results[:g]
            report.rows.append(
                {
                    "method": method,
                    "ods": g,
                    "travel_time_sum": sum(r[0] for r in part),
                    "settled_sum": sum(r[1] for r in part),
                    "relax_sum": sum(r[2] for r in part),
                }
            )
    # timing repetitions run serially on one thread
    for method in plan.methods:
        for g in timing_groups:
            walls = []
            for _ in range(plan.repetitions):
                t0 = time.perf_counter_ns()
                for s, e in ods[:g]:
                    run_method(method, net, graphs, s, e)
                walls.append(time.perf_counter_ns() - t0)
            report.timings.append({"method": method, "ods": g, "wall_nanos": int(statistics.median(walls))})
    if timing_groups and len(plan.methods) > 1:
        last = timing_groups[-1]
        wall = {t["method"]: t["wall_nanos"] for t in report.timings if t["ods"] == last}
        report.runtime_ordering = {
            "fastest": min(wall, key=wall.get),
            "slowest": max(wall, key=wall.get),
            "asserted": False,
        }
    report.assertions = _assertions(report)
    return report


def emit_report(report: BenchReport, fmt: str = "table", timing: bool = True) -> str:
    if fmt == "machine":
        return json.dumps(report.to_dict(timing=timing), indent=1, sort_keys=True) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    header = ("method", "ods", "travel_time_sum_s", "settled", "relaxed")
    rows = [tuple(str(r[k]) for k in ("method", "ods", "travel_time_sum", "settled_sum", "relax_sum")) for r in report.rows]
    lines = [f"# source {report.source}  seed {report.seed}"]
    lines += _table(header, rows)
    if timing and report.timings:
        lines.append("")
        lines += _table(
            ("method", "ods", "median_wall_ms"),
            [(t["method"], str(t["ods"]), f"{t['wall_nanos'] / 1e6:.3f}") for t in report.timings],
        )
    if report.assertions:
        lines.append("")
        for a in report.assertions:
            lines.append(f"{'PASS' if a['passed'] else 'FAIL'}  {a['name']}")
    return "\n".join(lines) + "\n"


def _table(header, rows) -> list[str]:
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
    return [fmt.format(*header)] + [fmt.format(*r) for r in rows]


@dataclass
class SweepReport:
    preset: str
    networks: int
    od_pairs: int = 0
    violations: dict = field(default_factory=dict)
    examples: list = field(default_factory=list)
    method1_differs: int = 0
    method3_differs: int = 0

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def to_dict(self) -> dict:
        return asdict(self)


def run_sweep(
    preset_name: str = "small",
    networks: int = 1000,
    seed: int = 0,
    methods=METHODS,
    oracle: bool = True,
) -> SweepReport:
    """Every OD pair of ``networks`` generated networks, checked per pair.

    Checks: exact agreement of the exact methods (and the brute-force oracle
    when ``oracle``), one-sided bounds for methods 1 and 3, and itinerary
    feasibility of the exact methods.
    """
    checks = ("exact agreement", "method1 >= oracle", "method3 <= oracle", "feasibility")
    rep = SweepReport(preset_name, networks, violations={c: 0 for c in checks})
    for k in range(networks):
        net = generate(preset(preset_name, seed + k))
        graphs = {}
        if "proposed" in methods:
            graphs[ATEN] = build_aten(net)
        if "method3" in methods:
            graphs[METHOD3] = build_method3(net)
        for s in sorted(net.stations):
            bf = brute_force_from(net, s) if oracle else {}
            for e in sorted(net.stations):
                if s == e:
                    continue
                res = {m: run_method(m, net, graphs, s, e) for m in methods}
                rep.od_pairs += 1
                exact = [res[m].total_seconds for m in ("method2", "proposed") if m in res]
                if oracle:
                    exact.append(bf.get(e))
                bad = []
                if len(set(exact)) > 1:
                    bad.append("exact agreement")
                ref = exact[0] if exact else None
                if ref is not None and "method1" in res:
                    rep.method1_differs += res["method1"].total_seconds != ref
                    if res["method1"].total_seconds < ref:
                        bad.append("method1 >= oracle")
                if ref is not None and "method3" in res:
                    rep.method3_differs += res["method3"].total_seconds != ref
                    if res["method3"].total_seconds > ref:
                        bad.append("method3 <= oracle")
                for m in ("method2", "proposed"):
                    r = res.get(m)
                    if r is not None and (not r.feasible or r.itinerary_seconds() != r.total_seconds):
                        bad.append("feasibility")
                        break
                for b in bad:
                    rep.violations[b] += 1
                if bad and len(rep.examples) < 10:
                    rep.examples.append({"seed": seed + k, "od": [s, e], "failed": bad})
    return rep
