"""The four shortest-path methods, path collapse, and an exhaustive oracle.

``method1``  node-label Dijkstra on the original topology, transfer penalty
             taken from the settled parent's incoming line (known to be wrong
             in some networks; kept faithful on purpose).
``method2``  edge-label Dijkstra on the original topology; exact.
``method3``  plain Dijkstra on the four-way expansion; may walk through edges.
``proposed`` plain Dijkstra on the adaptive expansion; exact.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from itertools import count

from .expansion import ATEN, METHOD3, EdgeKind, ExpandedNetwork
from .model import Arc, Direction, NetworkError, TransitNetwork, UnknownStation

METHODS = ("method1", "method2", "method3", "proposed")


class Unreachable(NetworkError):
    def __init__(self, origin, destination):
        self.origin = origin
        self.destination = destination
        super().__init__(f"station {destination} is unreachable from {origin}")


class InfeasiblePath(NetworkError):
    pass


@dataclass
class SolverStats:
    settled_count: int = 0
    relax_count: int = 0
    wall_nanos: int = 0
    pop_distances: list[int] | None = None


@dataclass(frozen=True)
class Leg:
    line: int
    direction: Direction
    stations: tuple[int, ...]
    seconds: int


@dataclass(frozen=True)
class TransferRecord:
    station: int
    from_line: int
    from_dir: Direction
    to_line: int
    to_dir: Direction
    seconds: int


@dataclass
class QueryResult:
    method: str
    origin: int
    destination: int
    total_seconds: int
    legs: list[Leg] = field(default_factory=list)
    transfers: list[TransferRecord] = field(default_factory=list)
    stats: SolverStats = field(default_factory=SolverStats)
    feasible: bool = True
    path: tuple = ()

    def itinerary_seconds(self) -> int:
        return sum(leg.seconds for leg in self.legs) + sum(t.seconds for t in self.transfers)

    def to_dict(self, include_timing: bool = True) -> dict:
        stats = {"settled": self.stats.settled_count, "relaxed": self.stats.relax_count}
        if include_timing:
            stats["wall_nanos"] = self.stats.wall_nanos
        return {
            "method": self.method,
            "origin": self.origin,
            "destination": self.destination,
            "total_seconds": self.total_seconds,
            "feasible": self.feasible,
            "legs": [
                {"line": g.line, "dir": int(g.direction), "stations": list(g.stations), "seconds": g.seconds}
                for g in self.legs
            ],
            "transfers": [
                {
                    "station": t.station,
                    "from_line": t.from_line,
                    "from_dir": int(t.from_dir),
                    "to_line": t.to_line,
                    "to_dir": int(t.to_dir),
                    "seconds": t.seconds,
                }
                for t in self.transfers
            ],
            "stats": stats,
        }


def _check_station(net: TransitNetwork, s: int):
    if s not in net.stations:
        raise UnknownStation(s)


def _itinerary_from_arcs(net: TransitNetwork, arcs: list[tuple[int, Arc]]):
    """Legs and transfer records of a walk given as original run edges."""
    legs: list[Leg] = []
    transfers: list[TransferRecord] = []
    cur = None
    for u, arc in arcs:
        if cur is not None and (cur[0], cur[1]) != (arc.line, arc.direction):
            legs.append(Leg(cur[0], cur[1], tuple(cur[2]), cur[3]))
            secs = net.transfer_seconds(u, cur[0], cur[1], arc.line, arc.direction)
            transfers.append(TransferRecord(u, cur[0], cur[1], arc.line, arc.direction, secs))
            cur = None
        if cur is None:
            cur = [arc.line, arc.direction, [u], 0]
        cur[2].append(arc.to)
        cur[3] += arc.seconds
    if cur is not None:
        legs.append(Leg(cur[0], cur[1], tuple(cur[2]), cur[3]))
    return legs, transfers


def method1(net: TransitNetwork, s: int, e: int, trace: bool = False) -> QueryResult:
    """Node-label Dijkstra with a transfer penalty at the settled node.

    When ``u`` is settled its parent edge is fixed, so the penalty for leaving
    ``u`` is looked up from that edge's line and direction only.
    """
    _check_station(net, s)
    _check_station(net, e)
    t0 = time.perf_counter_ns()
    stats = SolverStats(pop_distances=[] if trace else None)
    if s == e:
        stats.wall_nanos = time.perf_counter_ns() - t0
        return QueryResult("method1", s, e, 0, stats=stats)
    best = {s: (0, 0)}
    parent: dict[int, tuple[int, Arc]] = {}
    settled = set()
    seq = count()
    heap = [(0, 0, next(seq), s)]
    while heap:
        d, ntr, _, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        stats.settled_count += 1
        if trace:
            stats.pop_distances.append(d)
        if u == e:
            break
        incoming = parent.get(u)
        for arc in net.neighbors(u):
            if arc.to in settled:
                continue
            if not net.is_transfer(u) or incoming is None:
                nd, nt = d + arc.seconds, ntr
            else:
                in_arc = incoming[1]
                nd = d + arc.seconds + net.transfer_seconds(u, in_arc.line, in_arc.direction, arc.line, arc.direction)
                nt = ntr + (in_arc.line != arc.line)
            if (nd, nt) < best.get(arc.to, (float("inf"), 0)):
                best[arc.to] = (nd, nt)
                parent[arc.to] = (u, arc)
                stats.relax_count += 1
                heapq.heappush(heap, (nd, nt, next(seq), arc.to))
    if e not in settled:
        raise Unreachable(s, e)
    walk = []
    v = e
    while v != s:
        u, arc = parent[v]
        walk.append((u, arc))
        v = u
    walk.reverse()
    legs, transfers = _itinerary_from_arcs(net, walk)
    stats.wall_nanos = time.perf_counter_ns() - t0
    return QueryResult("method1", s, e, best[e][0], legs, transfers, stats, True, tuple(walk))


def method2(net: TransitNetwork, s: int, e: int, trace: bool = False) -> QueryResult:
    """Edge-label Dijkstra; labels are directed run edges with line and direction."""
    _check_station(net, s)
    _check_station(net, e)
    t0 = time.perf_counter_ns()
    stats = SolverStats(pop_distances=[] if trace else None)
    if s == e:
        stats.wall_nanos = time.perf_counter_ns() - t0
        return QueryResult("method2", s, e, 0, stats=stats)
    arcs, out = net.arc_table
    inf = float("inf")
    best = [(inf, 0)] * len(arcs)
    parent = [-1] * len(arcs)
    settled = [False] * len(arcs)
    seq = count()
    heap = []
    for i in out.get(s, ()):
        best[i] = (arcs[i][1].seconds, 0)
        heapq.heappush(heap, (arcs[i][1].seconds, 0, next(seq), i))
    found = -1
    while heap:
        d, ntr, _, i = heapq.heappop(heap)
        if settled[i]:
            continue
        settled[i] = True
        stats.settled_count += 1
        if trace:
            stats.pop_distances.append(d)
        a = arcs[i][1]
        v = a.to
        if v == e:
            found = i
            break
        for j in out[v]:
            if settled[j]:
                continue
            b = arcs[j][1]
            nd = d + b.seconds + net.transfer_seconds(v, a.line, a.direction, b.line, b.direction)
            nt = ntr + (a.line != b.line)
            if (nd, nt) < best[j]:
                best[j] = (nd, nt)
                parent[j] = i
                stats.relax_count += 1
                heapq.heappush(heap, (nd, nt, next(seq), j))
    if found < 0:
        raise Unreachable(s, e)
    walk = []
    i = found
    while i >= 0:
        walk.append(arcs[i])
        i = parent[i]
    walk.reverse()
    legs, transfers = _itinerary_from_arcs(net, walk)
    stats.wall_nanos = time.perf_counter_ns() - t0
    return QueryResult("method2", s, e, best[found][0], legs, transfers, stats, True, tuple(walk))


def dijkstra_expanded(xnet: ExpandedNetwork, sources, targets, stats: SolverStats):
    """Plain multi-source Dijkstra; returns ``(target_node, dist, edge_path)``.

    Ties on distance prefer fewer transfer edges, then insertion order. There
    is no transfer-station logic here: every penalty already sits on an edge.
    """
    n = len(xnet.nodes)
    inf = float("inf")
    dist = [inf] * n
    ntrans = [0] * n
    parent = [-1] * n
    done = [False] * n
    adjacency = xnet.adjacency
    seq = count()
    heap = []
    for v in sources:
        dist[v] = 0
        heap.append((0, 0, next(seq), v))
    heapq.heapify(heap)
    targets = set(targets)
    trace = stats.pop_distances
    while heap:
        d, nt, _, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        stats.settled_count += 1
        if trace is not None:
            trace.append(d)
        if u in targets:
            path = []
            v = u
            while parent[v] >= 0:
                path.append(parent[v])
                v = xnet.edges[parent[v]].src
            path.reverse()
            return u, d, path
        for v, w, ei, is_transfer in adjacency[u]:
            if done[v]:
                continue
            nd = d + w
            nnt = nt + is_transfer
            if nd < dist[v] or (nd == dist[v] and nnt < ntrans[v]):
                dist[v] = nd
                ntrans[v] = nnt
                parent[v] = ei
                stats.relax_count += 1
                heapq.heappush(heap, (nd, nnt, next(seq), v))
    return None, inf, []


def _expanded_query(method: str, xnet: ExpandedNetwork, s: int, e: int, trace: bool) -> QueryResult:
    _check_station(xnet.source, s)
    _check_station(xnet.source, e)
    t0 = time.perf_counter_ns()
    stats = SolverStats(pop_distances=[] if trace else None)
    if s == e:
        stats.wall_nanos = time.perf_counter_ns() - t0
        return QueryResult(method, s, e, 0, stats=stats)
    node, d, path = dijkstra_expanded(xnet, xnet.entry_nodes(s), xnet.entry_nodes(e), stats)
    if node is None:
        raise Unreachable(s, e)
    legs, transfers, feasible = collapse_edges(xnet, path)
    stats.wall_nanos = time.perf_counter_ns() - t0
    return QueryResult(method, s, e, d, legs, transfers, stats, feasible, tuple(path))


def method3(xnet: ExpandedNetwork, s: int, e: int, trace: bool = False) -> QueryResult:
    if xnet.mode != METHOD3:
        raise ValueError("method3 needs a graph from build_method3")
    return _expanded_query("method3", xnet, s, e, trace)


def proposed(xnet: ExpandedNetwork, s: int, e: int, trace: bool = False) -> QueryResult:
    if xnet.mode != ATEN:
        raise ValueError("proposed needs a graph from build_aten")
    return _expanded_query("proposed", xnet, s, e, trace)


def collapse_edges(xnet: ExpandedNetwork, path: list[int]):
    """Turn an expanded edge path into legs and transfer records.

    A chain of transfer edges inside one station becomes one record. A
    through edge is in-vehicle only when it sits between two run edges of its
    own line; any other use is a pedestrian shortcut and marks the result
    infeasible.
    """
    edges = [xnet.edges[ei] for ei in path]
    station = xnet.station_of
    feasible = True
    for k, e in enumerate(edges):
        if e.kind != EdgeKind.THROUGH:
            continue
        before = edges[k - 1] if k > 0 else None
        after = edges[k + 1] if k + 1 < len(edges) else None
        ok = (
            before is not None
            and after is not None
            and before.kind == EdgeKind.RUN
            and after.kind == EdgeKind.RUN
            and before.line == e.line == after.line
        )
        feasible = feasible and ok

    legs: list[Leg] = []
    transfers: list[TransferRecord] = []
    cur = None  # [line, dir, stations, seconds]
    pending = None  # [station, seconds]
    last_leg = None
    for e in edges:
        if e.kind == EdgeKind.TRANSFER:
            if pending is None:
                pending = [station(e.src), 0]
            pending[1] += e.seconds
            continue
        if e.kind == EdgeKind.THROUGH:
            continue
        u, v = station(e.src), station(e.dst)
        if cur is not None and (pending is not None or (cur[0], cur[1]) != (e.line, e.direction)):
            last_leg = Leg(cur[0], cur[1], tuple(cur[2]), cur[3])
            legs.append(last_leg)
            secs = pending[1] if pending is not None else 0
            transfers.append(TransferRecord(u, cur[0], cur[1], e.line, e.direction, secs))
            cur = None
            pending = None
        if cur is None:
            cur = [e.line, e.direction, [u], 0]
            if pending is not None:
                # transfer walked before the first ride; origin platforms are all free
                if pending[1]:
                    transfers.append(TransferRecord(u, e.line, Direction.NONE, e.line, e.direction, pending[1]))
                pending = None
        cur[2].append(v)
        cur[3] += e.seconds
    if cur is not None:
        legs.append(Leg(cur[0], cur[1], tuple(cur[2]), cur[3]))
    if pending is not None and pending[1] and legs:
        last = legs[-1]
        transfers.append(TransferRecord(pending[0], last.line, last.direction, last.line, Direction.NONE, pending[1]))
    return legs, transfers, feasible


def collapse_path(xnet: ExpandedNetwork, nodes: list[int]):
    """Collapse a node path of an expanded graph; see :func:`collapse_edges`."""
    path = []
    for u, v in zip(nodes, nodes[1:]):
        ei = xnet.edge_between(u, v)
        if ei is None:
            raise InfeasiblePath(f"nodes {u} and {v} are not adjacent")
        path.append(ei)
    return collapse_edges(xnet, path)


def brute_force_from(net: TransitNetwork, s: int, hop_limit: int | None = None) -> dict[int, int]:
    """Minimum cost to every station over all walks of at most ``hop_limit`` rides.

    Exhaustive in the sense of hop-bounded value iteration: after round k the
    table holds the minimum over every walk with k or fewer run edges. The
    walk structure and transfer costs are rebuilt here straight from the line
    sequences and the raw transfer tables.
    """
    rides = []  # (from, to, line, dir, seconds)
    for line in net.lines.values():
        seq = line.stations
        for k in range(len(seq) - 1):
            rides.append((seq[k], seq[k + 1], line.id, Direction.UP, line.run_up[k]))
            rides.append((seq[k + 1], seq[k], line.id, Direction.DOWN, line.run_down[k]))
    if hop_limit is None:
        hop_limit = len(rides)

    def walk_cost(at, line_a, dir_a, line_b, dir_b):
        if line_a == line_b:
            return 0
        spec = net.transfers[at]
        ka = Direction.NONE if spec.same_position[line_a] else dir_a
        kb = Direction.NONE if spec.same_position[line_b] else dir_b
        return spec.times[(line_a, ka, line_b, kb)]

    starting = {}
    for i, r in enumerate(rides):
        starting.setdefault(r[0], []).append(i)
    links = [
        [(j, rides[j][4] + walk_cost(r[1], r[2], r[3], rides[j][2], rides[j][3])) for j in starting.get(r[1], [])]
        for r in rides
    ]
    inf = float("inf")
    cost = [inf] * len(rides)
    for i in starting.get(s, []):
        cost[i] = rides[i][4]
    for _ in range(hop_limit - 1):
        nxt = list(cost)
        for i, c in enumerate(cost):
            if c == inf:
                continue
            for j, w in links[i]:
                if c + w < nxt[j]:
                    nxt[j] = c + w
        if nxt == cost:
            break
        cost = nxt
    out = {s: 0}
    for i, c in enumerate(cost):
        t = rides[i][1]
        if t != s and c < out.get(t, inf):
            out[t] = c
    return out


def brute_force(net: TransitNetwork, s: int, e: int, hop_limit: int | None = None) -> int | None:
    """Oracle travel time from ``s`` to ``e``; ``None`` if unreachable."""
    return brute_force_from(net, s, hop_limit).get(e)


def run_method(method: str, net: TransitNetwork, graphs: dict, s: int, e: int, trace: bool = False) -> QueryResult:
    """Dispatch by method name; ``graphs`` holds prebuilt expansions by mode."""
    if method == "method1":
        return method1(net, s, e, trace)
    if method == "method2":
        return method2(net, s, e, trace)
    if method == "method3":
        return method3(graphs[METHOD3], s, e, trace)
    if method == "proposed":
        return proposed(graphs[ATEN], s, e, trace)
    raise ValueError(f"unknown method {method!r}")
