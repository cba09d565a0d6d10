"""Transfer-station expansion.

Two builders turn a :class:`~aten.model.TransitNetwork` into a plain weighted
digraph on which ordinary Dijkstra can run:

* :func:`build_aten` - adaptive expansion. A line whose up and down boarding
  points coincide gets a single split node; otherwise the station gets a
  virtual through node (in-vehicle only) plus one platform node per approach
  side. Transfer edges connect platform-class nodes of different lines.
* :func:`build_method3` - the older four-way expansion: two side nodes per line
  joined by zero-weight through edges, complete pedestrian graph between lines.
  Pedestrians can walk the through edges, which is its known flaw.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import NamedTuple

from .model import (
    ARRIVAL_DIR,
    DEPARTURE_DIR,
    SIDE_BOTH,
    SIDE_NEXT,
    SIDE_PREV,
    Direction,
    NetworkError,
    TransitNetwork,
    UnknownStation,
)

ATEN = "aten"
METHOD3 = "method3"
PSEUDOCODE = "pseudocode"
WORKED_EXAMPLE = "worked-example"
MODES = (ATEN, METHOD3)
STYLES = (PSEUDOCODE, WORKED_EXAMPLE)


class TransferCase(Enum):
    A = "a"  # every line same position
    B = "b"  # exactly one line same position
    C = "c"  # exactly two lines same position
    D = "d"  # no line same position
    MIXED = "mixed"  # 4+ lines outside the a-d taxonomy


@dataclass(frozen=True)
class Classification:
    case: TransferCase
    line_count: int


class NodeKind(IntEnum):
    PLAIN = 0
    SPLIT = 1
    PLATFORM_UP = 2  # faces the next station on the line
    PLATFORM_DOWN = 3  # faces the previous station
    VIRTUAL = 4  # in-vehicle through node, no transfer edges


class EdgeKind(IntEnum):
    RUN = 0
    TRANSFER = 1
    THROUGH = 2


PLATFORM_KINDS = frozenset({NodeKind.SPLIT, NodeKind.PLATFORM_UP, NodeKind.PLATFORM_DOWN})
_SIDE_OF_KIND = {
    NodeKind.SPLIT: SIDE_BOTH,
    NodeKind.PLATFORM_UP: SIDE_NEXT,
    NodeKind.PLATFORM_DOWN: SIDE_PREV,
}
_KIND_OF_SIDE = {v: k for k, v in _SIDE_OF_KIND.items()}


class NodeKey(NamedTuple):
    station: int
    line: int  # -1 for plain nodes
    kind: NodeKind

    def label(self, net: TransitNetwork | None = None) -> str:
        name = net.stations[self.station].name if net is not None else str(self.station)
        if self.kind == NodeKind.PLAIN:
            return name
        return f"{name}[{self.line}:{self.kind.name.lower()}]"


class Edge(NamedTuple):
    src: int
    dst: int
    seconds: int
    kind: EdgeKind
    line: int = -1
    direction: Direction = Direction.NONE


class Stub(NamedTuple):
    """Half of a run edge between an expansion node and an original neighbor."""

    node: NodeKey
    neighbor: int
    line: int
    outbound: bool
    seconds: int


@dataclass
class StationExpansion:
    station: int
    nodes: list[NodeKey]
    stubs: list[Stub]
    transfers: list[tuple[NodeKey, NodeKey, int]]
    throughs: list[tuple[NodeKey, NodeKey, int]]

    @property
    def run_edge_count(self) -> int:
        return len(self.stubs)


class ExpandedNetwork:
    """Immutable expanded graph with a back-map to original stations."""

    def __init__(self, source: TransitNetwork, mode: str, style: str, nodes, edges):
        self.source = source
        self.mode = mode
        self.style = style
        self.nodes: tuple[NodeKey, ...] = tuple(nodes)
        self.index = {key: i for i, key in enumerate(self.nodes)}
        self.edges: tuple[Edge, ...] = tuple(edges)
        out: list[list[int]] = [[] for _ in self.nodes]
        for ei, e in enumerate(self.edges):
            out[e.src].append(ei)
        self.out = tuple(tuple(x) for x in out)
        # (dst, seconds, edge index, is_transfer) per node, for the solvers' inner loop
        self.adjacency = tuple(
            tuple((self.edges[ei].dst, self.edges[ei].seconds, ei, self.edges[ei].kind == EdgeKind.TRANSFER) for ei in x)
            for x in out
        )
        entries: dict[int, list[int]] = {}
        members: dict[int, list[int]] = {}
        for i, key in enumerate(self.nodes):
            members.setdefault(key.station, []).append(i)
            if key.kind == NodeKind.PLAIN or key.kind in PLATFORM_KINDS:
                entries.setdefault(key.station, []).append(i)
        self._entries = {s: tuple(v) for s, v in entries.items()}
        self._members = {s: tuple(v) for s, v in members.items()}

    def __repr__(self):
        return f"ExpandedNetwork({self.mode}, {len(self.nodes)} nodes, {len(self.edges)} edges)"

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def station_of(self, node: int) -> int:
        return self.nodes[node].station

    def entry_nodes(self, station: int) -> tuple[int, ...]:
        """Nodes where a passenger can start or end a journey at ``station``."""
        try:
            return self._entries[station]
        except KeyError:
            raise UnknownStation(station) from None

    def station_nodes(self, station: int) -> tuple[int, ...]:
        return self._members.get(station, ())

    def edge_between(self, u: int, v: int) -> int | None:
        best = None
        for ei in self.out[u]:
            e = self.edges[ei]
            if e.dst == v and (best is None or e.seconds < self.edges[best].seconds):
                best = ei
        return best

    def counts_by_kind(self) -> dict[str, int]:
        out = {k.name.lower(): 0 for k in EdgeKind}
        for e in self.edges:
            out[e.kind.name.lower()] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "schema": "aten-expanded/1",
            "mode": self.mode,
            "style": self.style,
            "nodes": [
                {"id": i, "station": k.station, "line": k.line, "kind": k.kind.name.lower()}
                for i, k in enumerate(self.nodes)
            ],
            "edges": [
                {
                    "src": e.src,
                    "dst": e.dst,
                    "seconds": e.seconds,
                    "kind": e.kind.name.lower(),
                    "line": e.line,
                    "dir": int(e.direction),
                }
                for e in self.edges
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def classify_transfer_station(net: TransitNetwork, s: int) -> Classification:
    if s not in net.stations:
        raise UnknownStation(s)
    spec = net.transfers.get(s)
    if spec is None:
        raise NetworkError(f"station {s} is not a transfer station")
    flags = list(spec.same_position.values())
    same = sum(flags)
    n = len(flags)
    if same == n:
        case = TransferCase.A
    elif same == 0:
        case = TransferCase.D
    elif same == 1:
        case = TransferCase.B
    elif same == 2 and n == 3:
        case = TransferCase.C
    else:
        case = TransferCase.MIXED
    return Classification(case, n)


def _line_neighbors(net: TransitNetwork, s: int, line: int) -> dict[str, tuple[int, int, int]]:
    """Map side -> (neighbor, seconds leaving s, seconds arriving at s)."""
    ln = net.lines[line]
    k = ln.position(s)
    out = {}
    if k + 1 < len(ln.stations):
        out[SIDE_NEXT] = (ln.stations[k + 1], ln.run_up[k], ln.run_down[k])
    if k > 0:
        out[SIDE_PREV] = (ln.stations[k - 1], ln.run_down[k - 1], ln.run_up[k - 1])
    return out


def _splits_line(net: TransitNetwork, s: int, line: int, style: str) -> bool:
    if style == WORKED_EXAMPLE:
        return True
    return not net.transfers[s].same_position[line]


def _stubs(node: NodeKey, nbrs, sides, line: int) -> list[Stub]:
    out = []
    for side in sides:
        if side in nbrs:
            nb, t_out, t_in = nbrs[side]
            out.append(Stub(node, nb, line, True, t_out))
            out.append(Stub(node, nb, line, False, t_in))
    return out


def expand_station(net: TransitNetwork, s: int, style: str = PSEUDOCODE, mode: str = ATEN) -> StationExpansion:
    """Replace transfer station ``s`` by its expansion nodes.

    Run edges are returned as stubs to the original neighbor stations; the
    graph builders join stubs from both ends of each original run edge.
    """
    spec = net.transfers.get(s)
    if spec is None:
        raise NetworkError(f"station {s} is not a transfer station")
    nodes: list[NodeKey] = []
    stubs: list[Stub] = []
    throughs = []
    platforms: list[NodeKey] = []
    for line in sorted(spec.same_position):
        nbrs = _line_neighbors(net, s, line)
        if mode == METHOD3:
            sides = [side for side in (SIDE_NEXT, SIDE_PREV) if side in nbrs]
            keys = [NodeKey(s, line, _KIND_OF_SIDE[side]) for side in sides]
            for key, side in zip(keys, sides):
                stubs += _stubs(key, nbrs, [side], line)
            if len(keys) == 2:
                throughs += [(keys[0], keys[1], 0), (keys[1], keys[0], 0)]
            nodes += keys
            platforms += keys
        elif not _splits_line(net, s, line, style):
            key = NodeKey(s, line, NodeKind.SPLIT)
            stubs += _stubs(key, nbrs, (SIDE_NEXT, SIDE_PREV), line)
            nodes.append(key)
            platforms.append(key)
        else:
            if len(nbrs) == 2:
                virtual = NodeKey(s, line, NodeKind.VIRTUAL)
                stubs += _stubs(virtual, nbrs, (SIDE_NEXT, SIDE_PREV), line)
                nodes.append(virtual)
            for side in (SIDE_NEXT, SIDE_PREV):
                if side in nbrs:
                    key = NodeKey(s, line, _KIND_OF_SIDE[side])
                    stubs += _stubs(key, nbrs, [side], line)
                    nodes.append(key)
                    platforms.append(key)
    transfers = []
    for a in platforms:
        for b in platforms:
            if a.line == b.line:
                continue
            secs = spec.seconds(
                a.line, ARRIVAL_DIR[_SIDE_OF_KIND[a.kind]], b.line, DEPARTURE_DIR[_SIDE_OF_KIND[b.kind]]
            )
            transfers.append((a, b, secs))
    return StationExpansion(s, sorted(nodes), stubs, transfers, throughs)


def _build(net: TransitNetwork, mode: str, style: str) -> ExpandedNetwork:
    if mode not in MODES:
        raise ValueError(f"unknown expansion mode {mode!r}")
    if style not in STYLES:
        raise ValueError(f"unknown expansion style {style!r}")
    net.require_valid()
    keys: list[NodeKey] = []
    out_stubs: dict[tuple[int, int, int], list[NodeKey]] = {}
    in_stubs: dict[tuple[int, int, int], list[NodeKey]] = {}
    expansions = []
    for s in sorted(net.stations):
        if net.is_transfer(s):
            ex = expand_station(net, s, style=style, mode=mode)
            expansions.append(ex)
            keys += ex.nodes
            for st in ex.stubs:
                target = out_stubs if st.outbound else in_stubs
                target.setdefault((s, st.neighbor, st.line), []).append(st.node)
        else:
            keys.append(NodeKey(s, -1, NodeKind.PLAIN))
    keys.sort()
    index = {k: i for i, k in enumerate(keys)}

    def ends(table, s, nb, line):
        if net.is_transfer(s):
            return table[(s, nb, line)]
        return [NodeKey(s, -1, NodeKind.PLAIN)]

    edges = []
    for u, arc in net.arcs():
        for a in ends(out_stubs, u, arc.to, arc.line):
            for b in ends(in_stubs, arc.to, u, arc.line):
                edges.append(Edge(index[a], index[b], arc.seconds, EdgeKind.RUN, arc.line, arc.direction))
    for ex in expansions:
        for a, b, secs in ex.transfers:
            edges.append(Edge(index[a], index[b], secs, EdgeKind.TRANSFER))
        for a, b, secs in ex.throughs:
            edges.append(Edge(index[a], index[b], secs, EdgeKind.THROUGH, a.line))
    edges.sort(key=lambda e: (e.src, e.dst, e.kind, e.line, e.direction))
    return ExpandedNetwork(net, mode, style, keys, edges)


def build_aten(net: TransitNetwork, style: str = PSEUDOCODE) -> ExpandedNetwork:
    return _build(net, ATEN, style)


def build_method3(net: TransitNetwork) -> ExpandedNetwork:
    return _build(net, METHOD3, PSEUDOCODE)


def build(net: TransitNetwork, mode: str = ATEN, style: str = PSEUDOCODE) -> ExpandedNetwork:
    return _build(net, mode, style)


def predict_expansion_size(net: TransitNetwork, mode: str = ATEN, style: str = PSEUDOCODE) -> tuple[int, int]:
    """Closed-form ``(node_count, directed_edge_count)`` of the expanded graph.

    Computed from per-line multiplicities only; never builds the graph.
    """
    net.require_valid()

    def sides(s, line):
        ln = net.lines[line]
        k = ln.position(s)
        return int(k > 0) + int(k + 1 < len(ln.stations))

    def split(s, line):
        return style == WORKED_EXAMPLE or not net.transfers[s].same_position[line]

    def attach(s, line):
        # expansion nodes of s touched by one run edge toward one neighbor
        if not net.is_transfer(s) or mode == METHOD3 or not split(s, line):
            return 1
        return 2 if sides(s, line) == 2 else 1

    nodes = 0
    edges = 0
    for s in net.stations:
        if not net.is_transfer(s):
            nodes += 1
            continue
        platform_counts = []
        for line in net.lines_at(s):
            n = sides(s, line)
            if mode == METHOD3:
                nodes += n
                platform_counts.append(n)
                edges += 2 if n == 2 else 0
            elif split(s, line):
                nodes += n + (1 if n == 2 else 0)
                platform_counts.append(n)
            else:
                nodes += 1
                platform_counts.append(1)
        total = sum(platform_counts)
        edges += total * total - sum(k * k for k in platform_counts)
    for line in net.lines.values():
        seq = line.stations
        for k in range(len(seq) - 1):
            edges += 2 * attach(seq[k], line.id) * attach(seq[k + 1], line.id)
    return nodes, edges
