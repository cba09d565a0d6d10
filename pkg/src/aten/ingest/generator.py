"""Seeded synthetic metro networks.

Lines are drawn with random lengths, then linked by interchange stations: a
spanning tree of interchanges keeps the network connected, extra ones are
sprinkled over random line pairs (or triples). Adversarial interchanges get
lopsided transfer tables so the known failure modes of the baseline methods
actually show up.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, replace

from ..model import (
    ARRIVAL_DIR,
    SIDE_BOTH,
    SIDE_NEXT,
    SIDE_PREV,
    Direction,
    Line,
    NetworkError,
    Station,
    TransferSpec,
    TransitNetwork,
    transfer_closure,
    validate,
)


class GenerationError(NetworkError):
    pass


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    line_count: int = 4
    stations_per_line: tuple[int, int] = (4, 8)
    transfer_station_fraction: float = 0.15
    same_position_probability: float = 0.5
    run_time: tuple[int, int] = (90, 240)
    transfer_time: tuple[int, int] = (60, 300)
    adversarial_fraction: float = 0.0
    three_line_fraction: float = 0.0
    station_count: int | None = None
    transfer_count: int | None = None
    require_witnesses: bool = False

    def check(self):
        for name in ("stations_per_line", "run_time", "transfer_time"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise GenerationError(f"{name} range is empty: {lo}..{hi}")
        for name in ("transfer_station_fraction", "same_position_probability", "adversarial_fraction", "three_line_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise GenerationError(f"{name} must lie in [0, 1], got {v}")
        if self.line_count < 1:
            raise GenerationError("line_count must be positive")
        if self.stations_per_line[0] < 2:
            raise GenerationError("lines need at least 2 stations")
        if self.run_time[0] <= 0:
            raise GenerationError("run times must be positive")
        if self.transfer_time[0] < 0:
            raise GenerationError("transfer times must be nonnegative")

    def to_dict(self) -> dict:
        return asdict(self)


def preset(name: str, seed: int = 0) -> GenParams:
    """Named parameter sets: ``small`` (at most 12 stations), ``medium``, ``beijing_scale``."""
    if name == "small":
        rng = random.Random(f"small-{seed}")
        lines = rng.choice((2, 3))
        return GenParams(
            seed=seed,
            line_count=lines,
            stations_per_line=(3, 6),
            transfer_station_fraction=0.3,
            same_position_probability=0.4,
            run_time=(60, 180),
            transfer_time=(30, 240),
            adversarial_fraction=0.5,
            three_line_fraction=0.3 if lines == 3 else 0.0,
            station_count=rng.randint(5, 12),
        )
    if name == "medium":
        return GenParams(
            seed=seed,
            line_count=8,
            stations_per_line=(6, 14),
            transfer_station_fraction=0.16,
            same_position_probability=0.5,
            adversarial_fraction=0.3,
            three_line_fraction=0.1,
            station_count=80,
        )
    if name == "beijing_scale":
        # 380 stations / 61 interchanges as in the published aggregates;
        # 38 lines and 3 three-line interchanges give 812 directed run edges
        return GenParams(
            seed=seed,
            line_count=38,
            stations_per_line=(6, 18),
            transfer_station_fraction=61 / 380,
            same_position_probability=0.5,
            run_time=(90, 240),
            transfer_time=(60, 360),
            adversarial_fraction=0.2,
            three_line_fraction=3 / 61,
            station_count=380,
            transfer_count=61,
            require_witnesses=True,
        )
    raise KeyError(f"unknown preset {name!r}; choose from {PRESETS}")


PRESETS = ("small", "medium", "beijing_scale")


def _memberships(rng: random.Random, p: GenParams, lengths: list[int]) -> list[list[int]]:
    L = p.line_count
    if p.transfer_count is not None:
        T = p.transfer_count
    else:
        base = p.station_count if p.station_count is not None else round(sum(lengths) / (1 + p.transfer_station_fraction))
        T = round(p.transfer_station_fraction * base)
    if T < L - 1:
        if p.transfer_count is not None:
            raise GenerationError(f"{T} interchanges cannot connect {L} lines")
        T = L - 1
    if L < 2:
        if T:
            raise GenerationError("a single line has no crossings for interchanges")
        return []
    order = list(range(L))
    rng.shuffle(order)
    sets = [[order[i], order[rng.randrange(i)]] for i in range(1, L)]
    while len(sets) < T:
        sets.append(rng.sample(range(L), 2))
    T3 = round(p.three_line_fraction * T) if L >= 3 else 0
    for k in rng.sample(range(T), T3):
        extra = [ln for ln in range(L) if ln not in sets[k]]
        sets[k].append(rng.choice(extra))
    return [sorted(s) for s in sets]


def _fit_lengths(rng: random.Random, p: GenParams, lengths: list[int], sets: list[list[int]]) -> list[int]:
    lo, hi = p.stations_per_line
    need = [0] * p.line_count
    for s in sets:
        for ln in s:
            need[ln] += 1
    floor = [max(2, n) for n in need]
    lengths = [max(a, b) for a, b in zip(lengths, floor)]
    if p.station_count is None:
        return lengths
    target = p.station_count + sum(len(s) - 1 for s in sets)
    if target < sum(floor):
        raise GenerationError(f"{p.station_count} stations cannot host {len(sets)} interchanges on {p.line_count} lines")
    while sum(lengths) < target:
        room = [i for i in range(p.line_count) if lengths[i] < hi] or list(range(p.line_count))
        lengths[rng.choice(room)] += 1
    while sum(lengths) > target:
        room = [i for i in range(p.line_count) if lengths[i] > max(lo, floor[i])]
        room = room or [i for i in range(p.line_count) if lengths[i] > floor[i]]
        lengths[rng.choice(room)] -= 1
    return lengths


def _sides(same: bool) -> list[str]:
    return [SIDE_BOTH] if same else [SIDE_NEXT, SIDE_PREV]


def _transfer_tables(rng, p: GenParams, interchanges, flags, adversarial) -> list[TransferSpec]:
    lo, hi = p.transfer_time
    cheap_hi = max(lo, lo + (hi - lo) // 4)
    specs = []
    for sid in interchanges:
        same = flags[sid]
        times = {}
        if sid in adversarial:
            # some arrival platforms are far from everything, the rest are close
            nodes = [(ln, side) for ln in sorted(same) for side in _sides(same[ln])]
            far = {n for n in nodes if rng.random() < 0.5}
            if not far:
                far = {rng.choice(nodes)}
        for a in sorted(same):
            for b in sorted(same):
                if a == b:
                    continue
                for da in ((Direction.NONE,) if same[a] else (Direction.UP, Direction.DOWN)):
                    for db in ((Direction.NONE,) if same[b] else (Direction.UP, Direction.DOWN)):
                        if sid in adversarial:
                            side = next(s for s, d in ARRIVAL_DIR.items() if d == da)
                            if (a, side) in far:
                                secs = rng.randint(2 * hi, 4 * hi)
                            else:
                                secs = rng.randint(lo, cheap_hi)
                        else:
                            secs = rng.randint(lo, hi)
                        times[(a, da, b, db)] = secs
        spec = TransferSpec(sid, same, times)
        specs.append(TransferSpec(sid, same, transfer_closure(spec)))
    return specs


def _draw(p: GenParams, rng: random.Random):
    lo, hi = p.stations_per_line
    lengths = [rng.randint(lo, hi) for _ in range(p.line_count)]
    sets = _memberships(rng, p, lengths)
    lengths = _fit_lengths(rng, p, lengths, sets)
    slots: list[list[int | None]] = [[None] * n for n in lengths]
    per_line: dict[int, list[int]] = {}
    for k, s in enumerate(sets):
        for ln in s:
            per_line.setdefault(ln, []).append(k)
    for ln, ks in per_line.items():
        positions = rng.sample(range(lengths[ln]), len(ks))
        for k, pos in zip(ks, positions):
            slots[ln][pos] = ("x", k)
    ids: dict = {}
    sequences = []
    next_id = 1
    for ln in range(p.line_count):
        seq = []
        for pos, tag in enumerate(slots[ln]):
            key = tag if tag is not None else ("p", ln, pos)
            if key not in ids:
                ids[key] = next_id
                next_id += 1
            seq.append(ids[key])
        sequences.append(seq)
    stations = [Station(i, f"S{i:03d}") for i in range(1, next_id)]
    rlo, rhi = p.run_time
    lines = []
    for ln, seq in enumerate(sequences):
        up = [rng.randint(rlo, rhi) for _ in range(len(seq) - 1)]
        down = [min(rhi, max(rlo, w + rng.randint(-10, 10))) for w in up]
        lines.append(Line(ln + 1, f"L{ln + 1}", seq, up, down))
    interchanges = sorted(ids[("x", k)] for k in range(len(sets)))
    line_sets = {ids[("x", k)]: [ln + 1 for ln in s] for k, s in enumerate(sets)}
    return stations, lines, interchanges, line_sets


def generate(params: GenParams) -> TransitNetwork:
    params.check()
    rng = random.Random(params.seed)
    stations, lines, interchanges, line_sets = _draw(params, rng)
    attempts = 20 if params.require_witnesses and params.adversarial_fraction > 0 else 1
    for _ in range(attempts):
        flags = {
            sid: {ln: rng.random() < params.same_position_probability for ln in line_sets[sid]}
            for sid in interchanges
        }
        n_adv = round(params.adversarial_fraction * len(interchanges))
        if params.adversarial_fraction > 0 and interchanges:
            n_adv = max(1, n_adv)
        adversarial = set(rng.sample(interchanges, n_adv))
        for sid in sorted(adversarial):
            if all(flags[sid].values()):
                flags[sid][rng.choice(sorted(flags[sid]))] = False
        specs = _transfer_tables(rng, params, interchanges, flags, adversarial)
        net = TransitNetwork(stations, lines, specs)
        report = validate(net)
        if not report.ok:
            raise GenerationError(f"generator produced an invalid network: {report.findings[0]}")
        if attempts == 1 or all(find_witnesses(net, seed=params.seed).values()):
            return net
    raise GenerationError("no adversarial witnesses after 20 attempts")


def find_witnesses(net: TransitNetwork, seed: int = 0, budget: int = 3000) -> dict[str, tuple[int, int] | None]:
    """Look for OD pairs where method 1 or method 3 disagrees with the oracle."""
    from ..expansion import build_method3
    from ..solvers import method1, method2, method3

    m3 = build_method3(net)
    ids = sorted(net.stations)
    rng = random.Random(seed)
    found = {"method1": None, "method3": None}
    pairs = len(ids) * (len(ids) - 1)
    for k in rng.sample(range(pairs), min(budget, pairs)):
        s = ids[k // (len(ids) - 1)]
        e = [x for x in ids if x != s][k % (len(ids) - 1)]
        exact = method2(net, s, e).total_seconds
        if found["method1"] is None and method1(net, s, e).total_seconds != exact:
            found["method1"] = (s, e)
        if found["method3"] is None and method3(m3, s, e).total_seconds != exact:
            found["method3"] = (s, e)
        if all(found.values()):
            break
    return found


def params_from_dict(d: dict) -> GenParams:
    d = dict(d)
    for key in ("stations_per_line", "run_time", "transfer_time"):
        if key in d:
            d[key] = tuple(d[key])
    return replace(GenParams(), **d)
