import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aten.expansion import (
    ATEN,
    METHOD3,
    WORKED_EXAMPLE,
    EdgeKind,
    NodeKey,
    NodeKind,
    TransferCase,
    build_aten,
    build_method3,
    classify_transfer_station,
    expand_station,
    predict_expansion_size,
)
from aten.ingest import generate, preset
from aten.model import NetworkError

from conftest import single_line, star


@pytest.mark.parametrize(
    "flags, case",
    [
        ([True, True], TransferCase.A),
        ([True, False], TransferCase.B),
        ([False, False], TransferCase.D),
        ([True, True, True], TransferCase.A),
        ([True, False, False], TransferCase.B),
        ([True, True, False], TransferCase.C),
        ([False, False, False], TransferCase.D),
    ],
)
def test_classify(flags, case):
    c = classify_transfer_station(star(flags), 0)
    assert c.case == case
    assert c.line_count == len(flags)


def test_classify_rejects_plain_station():
    with pytest.raises(NetworkError):
        classify_transfer_station(star([True, True]), 1)


# (nodes, directed run edges, directed transfer edges), counted by hand from
# the expansion rules: a same-position line gives 1 node and 4 run edges, a
# split line gives 3 nodes and 8 run edges, and transfers join every ordered
# pair of platform-class nodes on different lines.
HAND_COUNTS = [
    ([True, True], (2, 8, 2)),
    ([False, False], (6, 16, 8)),
    ([True, True, True], (3, 12, 6)),
    ([True, False], (4, 12, 4)),
    ([False, False, False], (9, 24, 24)),
    ([True, True, False], (5, 16, 10)),  # platform-class 1,1,2: 4*4 - 6
]


@pytest.mark.parametrize("flags, expected", HAND_COUNTS)
def test_expand_station_counts(flags, expected):
    ex = expand_station(star(flags), 0)
    assert (len(ex.nodes), ex.run_edge_count, len(ex.transfers)) == expected


def test_expand_station_case_d_node_kinds():
    ex = expand_station(star([False, False]), 0)
    kinds = sorted(k.kind for k in ex.nodes)
    assert kinds == [NodeKind.PLATFORM_UP, NodeKind.PLATFORM_UP, NodeKind.PLATFORM_DOWN,
                     NodeKind.PLATFORM_DOWN, NodeKind.VIRTUAL, NodeKind.VIRTUAL]


def test_terminal_line_gets_only_supported_nodes():
    # line 2 ends at the hub: one platform, no virtual node
    ex = expand_station(star([False, False], terminal=(2,)), 0)
    line2 = [k for k in ex.nodes if k.line == 2]
    assert [k.kind for k in line2] == [NodeKind.PLATFORM_DOWN]
    assert sum(1 for s in ex.stubs if s.line == 2) == 2


def test_zero_transfer_network_is_isomorphic():
    net = single_line(5)
    x = build_aten(net)
    assert all(k.kind == NodeKind.PLAIN for k in x.nodes)
    got = sorted((x.station_of(e.src), x.station_of(e.dst), e.seconds) for e in x.edges)
    want = sorted((u, a.to, a.seconds) for u, a in net.arcs())
    assert got == want
    m3 = build_method3(net)
    assert m3.nodes == x.nodes and m3.edges == x.edges


def test_cross_case_d(flaw):
    x = build_aten(flaw)
    plain = [k for k in x.nodes if k.kind == NodeKind.PLAIN]
    assert len(plain) == 4
    assert len(x.nodes) - 4 == 6
    assert x.counts_by_kind() == {"run": 16, "transfer": 8, "through": 0}


def test_method3_cross(flaw):
    m = build_method3(flaw)
    assert len(m.nodes) == 4 + 4
    through = [e for e in m.edges if e.kind == EdgeKind.THROUGH]
    assert len(through) == 4 and all(e.seconds == 0 for e in through)


def test_method3_flaw_has_pedestrian_shortcut(flaw):
    m = build_method3(flaw)
    idx = m.index
    a_side = idx[NodeKey(5, 1, NodeKind.PLATFORM_DOWN)]  # faces A
    c_side = idx[NodeKey(5, 1, NodeKind.PLATFORM_UP)]  # faces C
    b_side = idx[NodeKey(5, 2, NodeKind.PLATFORM_DOWN)]  # faces B
    w = lambda u, v: m.edges[m.edge_between(u, v)]  # noqa: E731
    assert w(a_side, c_side).kind == EdgeKind.THROUGH and w(a_side, c_side).seconds == 0
    assert w(c_side, b_side).seconds == 30 < w(a_side, b_side).seconds == 120


def test_aten_transfer_weights_follow_travel_direction(flaw):
    x = build_aten(flaw)
    idx = x.index
    a_side = idx[NodeKey(5, 1, NodeKind.PLATFORM_DOWN)]
    c_side = idx[NodeKey(5, 1, NodeKind.PLATFORM_UP)]
    b_side = idx[NodeKey(5, 2, NodeKind.PLATFORM_DOWN)]
    assert x.edges[x.edge_between(a_side, b_side)].seconds == 120
    assert x.edges[x.edge_between(c_side, b_side)].seconds == 30
    assert x.edge_between(a_side, c_side) is None


def test_virtual_nodes_have_no_transfer_edges():
    for seed in range(50):
        x = build_aten(generate(preset("medium", seed)))
        for e in x.edges:
            if e.kind == EdgeKind.TRANSFER:
                assert x.nodes[e.src].kind != NodeKind.VIRTUAL
                assert x.nodes[e.dst].kind != NodeKind.VIRTUAL


@pytest.mark.parametrize(
    "flags, expected",
    [([True, True], (2, 10)), ([False, False], (6, 24))],
)
def test_predict_single_station(flags, expected):
    net = star(flags)
    nodes, edges = predict_expansion_size(net)
    assert (nodes - 4, edges - 0) == expected  # four plain neighbours, all run edges touch the hub


def test_predict_no_transfers():
    net = single_line(6)
    assert predict_expansion_size(net) == (6, 10)
    assert predict_expansion_size(net, METHOD3) == (6, 10)


def _per_station_nodes(net):
    """s + 3d per interchange, less what line terminals cannot support."""
    total = 0
    for sid, spec in net.transfers.items():
        for line, same in spec.same_position.items():
            ln = net.lines[line]
            k = ln.position(sid)
            sides = (k > 0) + (k + 1 < len(ln.stations))
            total += 1 if same else sides + (sides == 2)
    return total


def test_beijing_scale_node_count():
    net = generate(preset("beijing_scale", 0))
    assert len(net.stations) == 380 and len(net.transfers) == 61
    x = build_aten(net)
    assert x.node_count == 319 + _per_station_nodes(net)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000), name=st.sampled_from(["small", "medium"]))
def test_predict_matches_build(seed, name):
    net = generate(preset(name, seed))
    for mode, style in ((ATEN, "pseudocode"), (ATEN, WORKED_EXAMPLE), (METHOD3, "pseudocode")):
        from aten.expansion import build

        x = build(net, mode, style)
        assert predict_expansion_size(net, mode, style) == (x.node_count, x.edge_count)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_build_is_deterministic_and_keeps_plain_edges(seed):
    net = generate(preset("medium", seed))
    a, b = build_aten(net), build_aten(net)
    assert a.dumps() == b.dumps()
    assert build_method3(net).dumps() == build_method3(net).dumps()
    # no zero weights unless the input had them
    if min(min(s.times.values()) for s in net.transfers.values()) > 0:
        assert all(e.seconds > 0 for e in a.edges)
    plain = {(a.nodes[e.src].station, a.nodes[e.dst].station, e.line): e.seconds for e in a.edges
             if a.nodes[e.src].kind == NodeKind.PLAIN and a.nodes[e.dst].kind == NodeKind.PLAIN}
    for u, arc in net.arcs():
        if not net.is_transfer(u) and not net.is_transfer(arc.to):
            assert plain[(u, arc.to, arc.line)] == arc.seconds
    counted = {}
    for e in a.edges:
        if a.nodes[e.src].kind == NodeKind.PLAIN and a.nodes[e.dst].kind == NodeKind.PLAIN:
            key = (e.src, e.dst, e.line)
            counted[key] = counted.get(key, 0) + 1
    assert set(counted.values()) <= {1}


def test_worked_example_style_beitucheng(beitucheng):
    x = build_aten(beitucheng, style=WORKED_EXAMPLE)
    btc = [k for k in x.nodes if k.station == 2]
    assert len(btc) == 6
    default = build_aten(beitucheng)
    assert len([k for k in default.nodes if k.station == 2]) == 2
    # Jiandemen reaches both a platform and the virtual node of line 10 in the same time
    jdm = x.index[NodeKey(4, -1, NodeKind.PLAIN)]
    into = {x.nodes[x.edges[ei].dst].kind: x.edges[ei].seconds for ei in x.out[jdm]}
    assert into == {NodeKind.PLATFORM_DOWN: 130, NodeKind.VIRTUAL: 130}


def test_expanded_serialization_has_back_map(flaw):
    import json

    d = json.loads(build_aten(flaw).dumps())
    assert d["schema"] == "aten-expanded/1"
    assert {n["station"] for n in d["nodes"]} == {1, 2, 3, 4, 5}
    assert {n["kind"] for n in d["nodes"]} == {"plain", "platform_up", "platform_down", "virtual"}
