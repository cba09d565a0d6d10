"""Transit network model: stations, lines, direction-specific transfer tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from enum import IntEnum
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple


class Direction(IntEnum):
    """Travel orientation along a line's station sequence.

    ``UP`` walks the sequence forward (index increasing), ``DOWN`` backward.
    ``NONE`` is only used as a transfer-table key for lines whose up and down
    boarding points coincide at a station.
    """

    NONE = 0
    UP = 1
    DOWN = 2


class NetworkError(Exception):
    """Raised for unknown ids and networks that fail validation."""


class UnknownStation(NetworkError, KeyError):
    pass


class InvalidNetwork(NetworkError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(str(f) for f in report.findings) or "invalid network")


@dataclass(frozen=True)
class Station:
    id: int
    name: str


@dataclass(frozen=True)
class Line:
    """A line as an ordered station sequence.

    ``run_up[k]`` is the time from ``stations[k]`` to ``stations[k + 1]``;
    ``run_down[k]`` is the time of the same segment travelled backward.
    """

    id: int
    name: str
    stations: tuple[int, ...]
    run_up: tuple[int, ...]
    run_down: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stations", tuple(self.stations))
        object.__setattr__(self, "run_up", tuple(self.run_up))
        object.__setattr__(self, "run_down", tuple(self.run_down))

    def position(self, station: int) -> int:
        return self.stations.index(station)


TransferKey = tuple[int, Direction, int, Direction]


@dataclass(frozen=True)
class TransferSpec:
    """Transfer data of one station served by two or more lines.

    ``same_position`` maps line id to whether that line's up and down boarding
    points coincide here. ``times`` maps ``(from_line, from_dir, to_line,
    to_dir)`` to seconds, where ``from_dir`` is the direction the passenger was
    travelling when arriving and ``to_dir`` the direction of departure.
    """

    station: int
    same_position: Mapping[int, bool]
    times: Mapping[TransferKey, int]

    def __post_init__(self):
        object.__setattr__(self, "same_position", MappingProxyType(dict(self.same_position)))
        times = {
            (int(a), Direction(b), int(c), Direction(d)): int(v)
            for (a, b, c, d), v in self.times.items()
        }
        object.__setattr__(self, "times", MappingProxyType(times))

    def key_dirs(self, line: int) -> tuple[Direction, ...]:
        if self.same_position.get(line, False):
            return (Direction.NONE,)
        return (Direction.UP, Direction.DOWN)

    def required_keys(self) -> list[TransferKey]:
        lines = sorted(self.same_position)
        keys = []
        for a, c in itertools.permutations(lines, 2):
            for b in self.key_dirs(a):
                for d in self.key_dirs(c):
                    keys.append((a, b, c, d))
        return sorted(keys)

    def seconds(self, from_line: int, from_dir: Direction, to_line: int, to_dir: Direction) -> int:
        """Transfer time for a passenger arriving on ``from_line`` travelling
        ``from_dir`` and leaving on ``to_line`` travelling ``to_dir``.

        Directions are the actual travel directions; they are collapsed to
        ``NONE`` for same-position lines. Staying on the same line is free.
        """
        if from_line == to_line:
            return 0
        if self.same_position[from_line]:
            from_dir = Direction.NONE
        if self.same_position[to_line]:
            to_dir = Direction.NONE
        return self.times[(from_line, from_dir, to_line, to_dir)]


class Arc(NamedTuple):
    """One directed run edge out of a station."""

    to: int
    line: int
    direction: Direction
    seconds: int


@dataclass(frozen=True)
class Finding:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def codes(self) -> list[str]:
        return [f.code for f in self.findings]

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)

    def add(self, code: str, message: str):
        self.findings.append(Finding(code, message))


class TransitNetwork:
    """Immutable rail network.

    Construction does not validate; call :func:`validate` (or
    :meth:`require_valid`) before handing a network to builders or solvers.
    """

    def __init__(
        self,
        stations: Iterable[Station],
        lines: Iterable[Line],
        transfers: Iterable[TransferSpec] = (),
    ):
        stations = list(stations)
        lines = list(lines)
        transfers = list(transfers)
        self._station_list = stations
        self._line_list = lines
        self._transfer_list = transfers
        self.stations: Mapping[int, Station] = MappingProxyType({s.id: s for s in stations})
        self.lines: Mapping[int, Line] = MappingProxyType({ln.id: ln for ln in lines})
        self.transfers: Mapping[int, TransferSpec] = MappingProxyType(
            {t.station: t for t in transfers}
        )

        adj: dict[int, list[Arc]] = {sid: [] for sid in self.stations}
        station_lines: dict[int, set[int]] = {sid: set() for sid in self.stations}
        for line in sorted(lines, key=lambda ln: ln.id):
            seq = line.stations
            for k in range(len(seq) - 1):
                u, v = seq[k], seq[k + 1]
                if k < len(line.run_up):
                    adj.setdefault(u, []).append(Arc(v, line.id, Direction.UP, line.run_up[k]))
                if k < len(line.run_down):
                    adj.setdefault(v, []).append(Arc(u, line.id, Direction.DOWN, line.run_down[k]))
            for s in seq:
                station_lines.setdefault(s, set()).add(line.id)
        for arcs in adj.values():
            arcs.sort(key=lambda a: (a.line, a.direction, a.to))
        self._adj = {s: tuple(arcs) for s, arcs in adj.items()}
        self._station_lines = {s: tuple(sorted(ls)) for s, ls in station_lines.items()}
        self._by_name: dict[str, list[int]] = {}
        for s in stations:
            self._by_name.setdefault(s.name, []).append(s.id)

    def __repr__(self):
        return (
            f"TransitNetwork({len(self.stations)} stations, {len(self.lines)} lines, "
            f"{len(self.transfers)} transfer stations)"
        )

    def __eq__(self, other):
        if not isinstance(other, TransitNetwork):
            return NotImplemented
        return (
            sorted(self._station_list, key=lambda s: s.id) == sorted(other._station_list, key=lambda s: s.id)
            and sorted(self._line_list, key=lambda ln: ln.id) == sorted(other._line_list, key=lambda ln: ln.id)
            and {k: (dict(v.same_position), dict(v.times)) for k, v in self.transfers.items()}
            == {k: (dict(v.same_position), dict(v.times)) for k, v in other.transfers.items()}
        )

    def neighbors(self, s: int) -> tuple[Arc, ...]:
        try:
            return self._adj[s]
        except KeyError:
            raise UnknownStation(s) from None

    def lines_at(self, s: int) -> tuple[int, ...]:
        if s not in self.stations:
            raise UnknownStation(s)
        return self._station_lines.get(s, ())

    def is_transfer(self, s: int) -> bool:
        return s in self.transfers

    def transfer_seconds(
        self, s: int, from_line: int, from_dir: Direction, to_line: int, to_dir: Direction
    ) -> int:
        if from_line == to_line:
            return 0
        return self.transfers[s].seconds(from_line, from_dir, to_line, to_dir)

    def arcs(self) -> list[tuple[int, Arc]]:
        """All directed run edges as ``(from_station, arc)`` in canonical order."""
        return list(self.arc_table[0])

    @cached_property
    def arc_table(self) -> tuple[tuple[tuple[int, Arc], ...], dict[int, tuple[int, ...]]]:
        """Indexed run edges plus, per station, the indices of its outgoing edges."""
        arcs = tuple((s, a) for s in sorted(self._adj) for a in self._adj[s])
        out: dict[int, list[int]] = {s: [] for s in self._adj}
        for i, (s, _) in enumerate(arcs):
            out[s].append(i)
        return arcs, {s: tuple(v) for s, v in out.items()}

    def resolve(self, ref) -> int:
        """Resolve a station by integer id or unique name."""
        if isinstance(ref, int) or (isinstance(ref, str) and ref.lstrip("-").isdigit()):
            sid = int(ref)
            if sid in self.stations:
                return sid
            if not isinstance(ref, str):
                raise UnknownStation(ref)
        matches = self._by_name.get(str(ref), [])
        if not matches:
            raise UnknownStation(ref)
        if len(matches) > 1:
            raise NetworkError(f"ambiguous station name {ref!r}: candidates {sorted(matches)}")
        return matches[0]

    def replace(self, *, lines=None, transfers=None) -> "TransitNetwork":
        return TransitNetwork(
            self._station_list,
            self._line_list if lines is None else lines,
            self._transfer_list if transfers is None else transfers,
        )

    def require_valid(self) -> "TransitNetwork":
        report = validate(self)
        if not report.ok:
            raise InvalidNetwork(report)
        return self


def neighbors(net: TransitNetwork, s: int) -> tuple[Arc, ...]:
    return net.neighbors(s)


def validate(net: TransitNetwork) -> ValidationReport:
    report = ValidationReport()
    seen: set[int] = set()
    for st in net._station_list:
        if st.id in seen:
            report.add("duplicate station id", f"station {st.id} defined twice")
        seen.add(st.id)
    seen_lines: set[int] = set()
    membership: dict[int, set[int]] = {}
    for line in net._line_list:
        if line.id in seen_lines:
            report.add("duplicate line id", f"line {line.id} defined twice")
        seen_lines.add(line.id)
        seq = line.stations
        if len(seq) < 2:
            report.add("line too short", f"line {line.id} has {len(seq)} station(s)")
        if len(set(seq)) != len(seq):
            report.add("repeated station", f"line {line.id} visits a station twice")
        for s in seq:
            if s not in net.stations:
                report.add("unknown station", f"line {line.id} references station {s}")
            membership.setdefault(s, set()).add(line.id)
        nseg = max(len(seq) - 1, 0)
        for label, runs in (("run_up", line.run_up), ("run_down", line.run_down)):
            if len(runs) != nseg:
                report.add("run time count", f"line {line.id} {label} has {len(runs)} entries, expected {nseg}")
            for k, w in enumerate(runs):
                if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
                    report.add("nonpositive run time", f"line {line.id} {label}[{k}] = {w!r}")
    for sid in sorted(net.stations):
        if sid not in membership:
            report.add("dangling station", f"station {sid} lies on no line")

    for sid in sorted(membership):
        lines = membership[sid]
        spec = net.transfers.get(sid)
        if len(lines) >= 2 and spec is None:
            report.add("missing transfer spec", f"station {sid} lies on {len(lines)} lines")
        if len(lines) < 2 and spec is not None:
            report.add("unexpected transfer spec", f"station {sid} lies on a single line")
    for sid, spec in sorted(net.transfers.items()):
        if sid not in net.stations:
            report.add("unknown station", f"transfer spec for unknown station {sid}")
            continue
        lines = membership.get(sid, set())
        if set(spec.same_position) != lines:
            report.add(
                "position flags mismatch",
                f"station {sid} flags lines {sorted(spec.same_position)}, serves {sorted(lines)}",
            )
            continue
        required = set(spec.required_keys())
        for key, secs in spec.times.items():
            if key not in required:
                report.add("invalid transfer key", f"station {sid} key {_fmt_key(key)}")
            elif not isinstance(secs, int) or secs < 0:
                report.add("negative transfer time", f"station {sid} key {_fmt_key(key)} = {secs!r}")
        missing = sorted(required - set(spec.times))
        if missing:
            report.add(
                "incomplete transfer table",
                f"station {sid} missing {', '.join(_fmt_key(k) for k in missing)}",
            )
    return report


def _fmt_key(key: TransferKey) -> str:
    a, b, c, d = key
    return f"({a},{Direction(b).name},{c},{Direction(d).name})"


# Approach sides of a station on one line. A passenger at the side facing the
# next station arrived travelling DOWN and departs travelling UP; mirrored for
# the side facing the previous station. Same-position lines have one side.
SIDE_NEXT = "next"
SIDE_PREV = "prev"
SIDE_BOTH = "both"

ARRIVAL_DIR = {SIDE_NEXT: Direction.DOWN, SIDE_PREV: Direction.UP, SIDE_BOTH: Direction.NONE}
DEPARTURE_DIR = {SIDE_NEXT: Direction.UP, SIDE_PREV: Direction.DOWN, SIDE_BOTH: Direction.NONE}


def _platform_sides(spec: TransferSpec, line: int) -> tuple[str, ...]:
    return (SIDE_BOTH,) if spec.same_position[line] else (SIDE_NEXT, SIDE_PREV)


def transfer_closure(spec: TransferSpec) -> dict[TransferKey, int]:
    """Shortest pedestrian times between platforms of one station.

    Chaining transfers through a third platform is a legal walk, so solvers
    working on an expanded graph may find it. Returns the table with every
    entry lowered to its all-pairs shortest value.
    """
    nodes = [(ln, side) for ln in sorted(spec.same_position) for side in _platform_sides(spec, ln)]
    inf = float("inf")
    dist = {}
    for a in nodes:
        for b in nodes:
            if a == b:
                dist[a, b] = 0
            elif a[0] == b[0]:
                dist[a, b] = inf
            else:
                dist[a, b] = spec.times[(a[0], ARRIVAL_DIR[a[1]], b[0], DEPARTURE_DIR[b[1]])]
    for k in nodes:
        for a in nodes:
            dak = dist[a, k]
            if dak == inf:
                continue
            for b in nodes:
                if dak + dist[k, b] < dist[a, b]:
                    dist[a, b] = dak + dist[k, b]
    out = {}
    for a in nodes:
        for b in nodes:
            if a[0] != b[0]:
                out[(a[0], ARRIVAL_DIR[a[1]], b[0], DEPARTURE_DIR[b[1]])] = int(dist[a, b])
    return out


def triangle_violations(net: TransitNetwork) -> list[tuple[int, TransferKey, int, int]]:
    """Entries that a chain of transfers inside the same station undercuts.

    Each item is ``(station, key, table_seconds, chained_seconds)``.
    """
    out = []
    for sid, spec in sorted(net.transfers.items()):
        closed = transfer_closure(spec)
        for key in sorted(closed):
            if closed[key] < spec.times[key]:
                out.append((sid, key, spec.times[key], closed[key]))
    return out


def close_transfer_times(net: TransitNetwork) -> TransitNetwork:
    """Return a copy whose transfer tables satisfy the triangle inequality."""
    specs = [
        TransferSpec(spec.station, spec.same_position, transfer_closure(spec))
        for _, spec in sorted(net.transfers.items())
    ]
    return net.replace(transfers=specs)
