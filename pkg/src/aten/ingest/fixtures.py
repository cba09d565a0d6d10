"""Small hand-built networks with known answers."""

from __future__ import annotations

from ..model import Direction, Line, Station, TransferSpec, TransitNetwork

UP, DOWN, NONE = Direction.UP, Direction.DOWN, Direction.NONE


def _same_position_spec(station: int, times: dict[tuple[int, int], int]) -> TransferSpec:
    lines = sorted({a for a, _ in times} | {b for _, b in times})
    return TransferSpec(
        station,
        {ln: True for ln in lines},
        {(a, NONE, b, NONE): secs for (a, b), secs in times.items()},
    )


def fixture_figure1() -> TransitNetwork:
    """Five stations where node-label Dijkstra locks in the wrong parent.

    A-B-C-E costs 100 + 60 + 150 + 175 + 100 = 585 and reaches C first
    (310 < 325), so C's parent becomes B. A-D-C-E costs
    120 + 80 + 125 + 100 = 425 and needs no transfer at C.
    """
    A, B, C, D, E = 1, 2, 3, 4, 5
    stations = [Station(i, n) for i, n in zip((A, B, C, D, E), "ABCDE")]
    lines = [
        Line(1, "AB", (A, B), (100,), (100,)),
        Line(2, "BC", (B, C), (150,), (150,)),
        Line(3, "AD", (A, D), (120,), (120,)),
        Line(4, "DCE", (D, C, E), (125, 100), (125, 100)),
    ]
    transfers = [
        _same_position_spec(A, {(1, 3): 60, (3, 1): 60}),
        _same_position_spec(B, {(1, 2): 60, (2, 1): 60}),
        _same_position_spec(C, {(2, 4): 175, (4, 2): 175}),
        _same_position_spec(D, {(3, 4): 80, (4, 3): 80}),
    ]
    return TransitNetwork(stations, lines, transfers)


def fixture_method3_flaw() -> TransitNetwork:
    """Cross network A-E-C (line 1) and B-E-D (line 2), E on split platforms.

    Transferring toward B costs 120 when arriving from A but only 30 when
    arriving from C, so a four-way expansion lets a pedestrian cross the
    zero-weight through edge to the C-side platform: 100 + 0 + 30 + 100 = 230
    against the legal 100 + 120 + 100 = 320.
    """
    A, B, C, D, E = 1, 2, 3, 4, 5
    stations = [Station(i, n) for i, n in zip((A, B, C, D, E), "ABCDE")]
    lines = [
        Line(1, "AEC", (A, E, C), (100, 100), (100, 100)),
        Line(2, "BED", (B, E, D), (100, 100), (100, 100)),
    ]
    times = {}
    for fd in (UP, DOWN):
        for td in (UP, DOWN):
            times[(1, fd, 2, td)] = 60
            times[(2, fd, 1, td)] = 60
    times[(1, UP, 2, DOWN)] = 120  # arrived from A, leaving toward B
    times[(1, DOWN, 2, DOWN)] = 30  # arrived from C, leaving toward B
    return TransitNetwork(stations, lines, [TransferSpec(E, {1: False, 2: False}, times)])


def fixture_cross(same_position: bool = False) -> TransitNetwork:
    """Plain two-line cross with uniform times; E is the only transfer station."""
    A, B, C, D, E = 1, 2, 3, 4, 5
    stations = [Station(i, n) for i, n in zip((A, B, C, D, E), "ABCDE")]
    lines = [
        Line(1, "AEC", (A, E, C), (90, 110), (95, 105)),
        Line(2, "BED", (B, E, D), (80, 120), (85, 115)),
    ]
    if same_position:
        spec = _same_position_spec(E, {(1, 2): 70, (2, 1): 70})
    else:
        times = {(a, fd, b, td): 70 for a, b in ((1, 2), (2, 1)) for fd in (UP, DOWN) for td in (UP, DOWN)}
        spec = TransferSpec(E, {1: False, 2: False}, times)
    return TransitNetwork(stations, lines, [spec])


def fixture_beitucheng() -> TransitNetwork:
    """Beitucheng on lines 8 and 10, both with shared up/down boarding points.

    Run and transfer seconds are illustrative, not measured.
    """
    ATZX, BTC, AHQ, JDM, AZM = 1, 2, 3, 4, 5
    stations = [
        Station(ATZX, "Aotizhongxin"),
        Station(BTC, "Beitucheng"),
        Station(AHQ, "Anhuaqiao"),
        Station(JDM, "Jiandemen"),
        Station(AZM, "Anzhenmen"),
    ]
    lines = [
        Line(8, "Line 8", (ATZX, BTC, AHQ), (150, 120), (150, 120)),
        Line(10, "Line 10", (JDM, BTC, AZM), (130, 140), (130, 140)),
    ]
    return TransitNetwork(stations, lines, [_same_position_spec(BTC, {(10, 8): 240, (8, 10): 240})])


FIXTURES = {
    "figure1": fixture_figure1,
    "method3_flaw": fixture_method3_flaw,
    "cross": fixture_cross,
    "beitucheng": fixture_beitucheng,
}
