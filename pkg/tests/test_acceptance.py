"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a ``PASS``/``FAIL`` line (visible under ``pytest -v``); the
same lines come out of ``python tests/test_acceptance.py``.
"""

import contextlib
import subprocess
import sys
import time
from pathlib import Path

import pytest

from aten.bench import BenchPlan, run_bench, run_sweep
from aten.expansion import EdgeKind, build_aten, build_method3, predict_expansion_size
from aten.ingest import fixture_figure1, fixture_method3_flaw, generate, preset
from aten.solvers import brute_force, method1, method2, method3, proposed

SWEEP_NETWORKS = 1000


def _report(capsys, number, title, ok, detail=""):
    cm = capsys.disabled() if capsys is not None else contextlib.nullcontext()
    with cm:
        print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  {detail}".rstrip())
    assert ok, f"criterion {number} failed: {detail}"


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    rep = run_sweep("small", SWEEP_NETWORKS, seed=0, oracle=True)
    return rep, time.perf_counter() - t0


def test_criterion_1_figure1(capsys):
    t0 = time.perf_counter()
    net = fixture_figure1()
    x = build_aten(net)
    got = (
        method1(net, 1, 5).total_seconds,
        method2(net, 1, 5).total_seconds,
        proposed(x, 1, 5).total_seconds,
        brute_force(net, 1, 5),
    )
    dt = time.perf_counter() - t0
    _report(capsys, 1, "figure-1 counterexample", got == (585, 425, 425, 425) and dt < 1.0, f"{got} in {dt:.3f}s")


def test_criterion_2_method3_flaw(capsys):
    t0 = time.perf_counter()
    net = fixture_method3_flaw()
    m3g = build_method3(net)
    r2, r3 = method2(net, 1, 2), method3(m3g, 1, 2)
    rp = proposed(build_aten(net), 1, 2)
    through = any(m3g.edges[ei].kind == EdgeKind.THROUGH for ei in r3.path)
    dt = time.perf_counter() - t0
    ok = r3.total_seconds < r2.total_seconds and through and not r3.feasible
    ok = ok and rp.total_seconds == r2.total_seconds and dt < 1.0
    detail = f"method2 {r2.total_seconds}, method3 {r3.total_seconds} (through={through}, feasible={r3.feasible}), proposed {rp.total_seconds} in {dt:.3f}s"
    _report(capsys, 2, "method-3 flaw", ok, detail)


def test_criterion_3_oracle_equivalence(sweep, capsys):
    rep, dt = sweep
    v = rep.violations
    bad = v["exact agreement"] + v["method1 >= oracle"] + v["method3 <= oracle"]
    ok = rep.networks >= 1000 and bad == 0 and dt < 300
    detail = f"{rep.networks} networks, {rep.od_pairs} OD pairs, {bad} violations in {dt:.1f}s"
    _report(capsys, 3, "oracle equivalence", ok, detail)


def test_criterion_4_expansion_formula(capsys):
    mismatches = []
    seeds = range(1000)
    for seed in seeds:
        for name in ("small", "medium"):
            net = generate(preset(name, seed))
            x = build_aten(net)
            if predict_expansion_size(net) != (x.node_count, x.edge_count):
                mismatches.append((name, seed))
    _report(capsys, 4, "expansion size formula", not mismatches, f"{2 * len(seeds)} networks, {len(mismatches)} mismatches")


def test_criterion_5_beijing_bench(capsys):
    t0 = time.perf_counter()
    rep = run_bench(BenchPlan(params=preset("beijing_scale", 0), od_groups=(50, 100, 150, 200, 250)))
    dt = time.perf_counter() - t0
    failed = [a["name"] for a in rep.assertions if not a["passed"]]
    ok = not failed and len(rep.assertions) == 6 and dt < 120
    n = rep.network
    detail = f"{n['stations']} stations, {n['transfer_stations']} transfer, {n['directed_run_edges']} edges; failed {failed} in {dt:.1f}s"
    _report(capsys, 5, "beijing-scale orderings", ok, detail)


def _cli(args, cwd):
    r = subprocess.run([sys.executable, "-m", "aten", *args], cwd=cwd, capture_output=True)
    outputs = [r.returncode, r.stdout, r.stderr]
    for a, b in zip(args, args[1:]):
        if a in ("-o", "--output"):
            outputs.append(Path(cwd, b).read_bytes())
        if a == "--output-dir":
            outputs.extend(p.read_bytes() for p in sorted(Path(cwd, b).iterdir()))
    return outputs


def _determinism_commands():
    cmds = [["fixtures", "--output-dir", "fx"]]
    files = [f"fx/{n}.json" for n in ("figure1", "method3_flaw", "beitucheng", "cross")]
    for name in ("small", "medium", "beijing_scale"):
        cmds.append(["gen", "--preset", name, "--seed", "5", "-o", f"{name}.json"])
        files.append(f"{name}.json")
    for f in files:
        cmds.append(["validate", f])
        for mode in ("aten", "method3"):
            cmds.append(["expand", f, "--mode", mode, "-o", f"{f}.{mode}.x"])
        cmds.append(["query", f, "1", "2", "--method", "proposed", "--json"])
        cmds.append(["query", f, "2", "1", "--method", "method1"])
        cmds.append(["bench", "--input", f, "--groups", "3,6", "--timing-groups", "3", "--repetitions", "1",
                     "--format", "machine", "--no-timing", "-o", f"{f}.bench"])
    cmds.append(["bench", "--preset", "small", "--networks", "5", "--seed", "2"])
    return cmds


def test_criterion_6_determinism(tmp_path, capsys):
    runs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        (d / "fx").mkdir(parents=True)
        runs.append([_cli(cmd, d) for cmd in _determinism_commands()])
    diffs = [" ".join(c) for c, a, b in zip(_determinism_commands(), *runs) if a != b]
    codes = {out[0] for out in runs[0]}
    ok = not diffs and codes <= {0, 1}
    _report(capsys, 6, "determinism", ok, f"{len(runs[0])} commands, {len(diffs)} differ {diffs[:3]}")


def test_criterion_7_feasibility(sweep, capsys):
    rep, _ = sweep
    n = rep.violations["feasibility"]
    _report(capsys, 7, "itinerary feasibility", n == 0, f"{rep.od_pairs} OD pairs, {n} infeasible")


if __name__ == "__main__":
    import tempfile

    t0 = time.perf_counter()
    swept = run_sweep("small", SWEEP_NETWORKS, seed=0, oracle=True)
    sw = (swept, time.perf_counter() - t0)
    failures = 0
    for fn, args in (
        (test_criterion_1_figure1, ()),
        (test_criterion_2_method3_flaw, ()),
        (test_criterion_3_oracle_equivalence, (sw,)),
        (test_criterion_4_expansion_formula, ()),
        (test_criterion_5_beijing_bench, ()),
        (test_criterion_6_determinism, (Path(tempfile.mkdtemp()),)),
        (test_criterion_7_feasibility, (sw,)),
    ):
        try:
            fn(*args, None)
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
