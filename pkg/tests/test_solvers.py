import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aten.expansion import NodeKey, NodeKind, build_aten, build_method3
from aten.ingest import generate, preset
from aten.model import Direction, Line, Station, TransitNetwork, UnknownStation
from aten.solvers import (
    METHODS,
    InfeasiblePath,
    Unreachable,
    brute_force,
    brute_force_from,
    collapse_path,
    method1,
    method2,
    method3,
    proposed,
    run_method,
)

from conftest import single_line


def _graphs(net):
    return {"aten": build_aten(net), "method3": build_method3(net)}


def test_figure1_values(figure1):
    g = _graphs(figure1)
    got = {m: run_method(m, figure1, g, 1, 5).total_seconds for m in METHODS}
    assert got == {"method1": 585, "method2": 425, "method3": 425, "proposed": 425}
    assert brute_force(figure1, 1, 5) == 425


def test_figure1_proposed_itinerary(figure1):
    r = proposed(build_aten(figure1), 1, 5)
    assert [leg.line for leg in r.legs] == [3, 4]
    assert [leg.stations for leg in r.legs] == [(1, 4), (4, 3, 5)]
    assert [(t.station, t.seconds) for t in r.transfers] == [(4, 80)]
    assert r.itinerary_seconds() == r.total_seconds == 425
    assert r.feasible


def test_method3_flaw(flaw):
    m2 = method2(flaw, 1, 2)
    m3 = method3(build_method3(flaw), 1, 2)
    pr = proposed(build_aten(flaw), 1, 2)
    assert (m2.total_seconds, m3.total_seconds, pr.total_seconds) == (320, 230, 320)
    assert not m3.feasible
    assert pr.feasible and m2.feasible
    assert brute_force(flaw, 1, 2) == 320
    # the infeasible answer rides into E, walks across, and leaves towards B
    assert [leg.stations for leg in m3.legs] == [(1, 5), (5, 2)]


def test_same_origin_destination(figure1):
    g = _graphs(figure1)
    for m in METHODS:
        r = run_method(m, figure1, g, 3, 3)
        assert r.total_seconds == 0 and r.legs == [] and r.transfers == []


def test_single_line_is_sum_of_runs():
    net = single_line(6, (10, 20, 30, 40, 50))
    g = _graphs(net)
    for m in METHODS:
        assert run_method(m, net, g, 0, 5).total_seconds == 150
        assert run_method(m, net, g, 4, 1).total_seconds == 90


def test_unknown_station(figure1):
    g = _graphs(figure1)
    for m in METHODS:
        with pytest.raises(UnknownStation):
            run_method(m, figure1, g, 1, 99)


def test_unreachable():
    st_ = [Station(i, f"s{i}") for i in range(4)]
    net = TransitNetwork(st_, [Line(1, "a", (0, 1), (5,), (5,)), Line(2, "b", (2, 3), (5,), (5,))])
    g = _graphs(net)
    for m in METHODS:
        with pytest.raises(Unreachable) as info:
            run_method(m, net, g, 0, 3)
        assert (info.value.origin, info.value.destination) == (0, 3)
    assert brute_force(net, 0, 3) is None


def test_solvers_reject_wrong_graph(figure1):
    with pytest.raises(ValueError):
        proposed(build_method3(figure1), 1, 5)
    with pytest.raises(ValueError):
        method3(build_aten(figure1), 1, 5)


def test_collapse_beitucheng_single_transfer(beitucheng):
    x = build_aten(beitucheng)
    idx = x.index
    path = [
        idx[NodeKey(4, -1, NodeKind.PLAIN)],
        idx[NodeKey(2, 10, NodeKind.SPLIT)],
        idx[NodeKey(2, 8, NodeKind.SPLIT)],
        idx[NodeKey(1, -1, NodeKind.PLAIN)],
    ]
    legs, transfers, feasible = collapse_path(x, path)
    assert feasible
    assert [(leg.line, leg.stations, leg.seconds) for leg in legs] == [(10, (4, 2), 130), (8, (2, 1), 150)]
    assert len(transfers) == 1
    t = transfers[0]
    assert (t.station, t.from_line, t.to_line, t.seconds) == (2, 10, 8, 240)
    assert (t.from_dir, t.to_dir) == (Direction.UP, Direction.DOWN)


def test_collapse_plain_path_is_one_leg():
    net = single_line(4)
    x = build_aten(net)
    legs, transfers, feasible = collapse_path(x, [x.index[NodeKey(i, -1, NodeKind.PLAIN)] for i in range(4)])
    assert feasible and transfers == [] and len(legs) == 1
    assert legs[0].stations == (0, 1, 2, 3) and legs[0].seconds == 60 + 61 + 62


def test_collapse_rejects_nonadjacent(figure1):
    x = build_aten(figure1)
    with pytest.raises(InfeasiblePath):
        collapse_path(x, [x.index[NodeKey(1, 1, NodeKind.SPLIT)], x.index[NodeKey(5, -1, NodeKind.PLAIN)]])


def test_method1_settles_fewest(figure1):
    a = method1(figure1, 1, 5).stats.settled_count
    b = method2(figure1, 1, 5).stats.settled_count
    assert a <= b


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 1_000_000))
def test_against_oracle(seed):
    net = generate(preset("small", seed))
    g = _graphs(net)
    ids = sorted(net.stations)
    s = ids[seed % len(ids)]
    oracle = brute_force_from(net, s)
    for e in ids:
        want = oracle.get(e)
        r2 = method2(net, s, e)
        rp = proposed(g["aten"], s, e)
        assert r2.total_seconds == rp.total_seconds == want
        assert rp.feasible and rp.itinerary_seconds() == want
        assert method1(net, s, e).total_seconds >= want
        assert method3(g["method3"], s, e).total_seconds <= want


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 1_000_000))
def test_settled_distances_nondecreasing(seed):
    net = generate(preset("small", seed))
    g = _graphs(net)
    ids = sorted(net.stations)
    for m in METHODS:
        r = run_method(m, net, g, ids[0], ids[-1], trace=True)
        d = r.stats.pop_distances
        assert d and all(a <= b for a, b in zip(d, d[1:]))


def test_query_result_dict(figure1):
    r = method2(figure1, 1, 5)
    d = r.to_dict(include_timing=False)
    assert d["total_seconds"] == 425 and "wall_nanos" not in d["stats"]
    assert "wall_nanos" in r.to_dict()["stats"]
