import itertools

import pytest

from aten.ingest import fixture_beitucheng, fixture_cross, fixture_figure1, fixture_method3_flaw
from aten.model import Direction, Line, Station, TransferSpec, TransitNetwork


def uniform_spec(station, flags, seconds=60):
    """Transfer spec with every required entry set to ``seconds``."""
    times = {}
    for a, b in itertools.permutations(sorted(flags), 2):
        for da in ((Direction.NONE,) if flags[a] else (Direction.UP, Direction.DOWN)):
            for db in ((Direction.NONE,) if flags[b] else (Direction.UP, Direction.DOWN)):
                times[(a, da, b, db)] = seconds
    return TransferSpec(station, flags, times)


def star(flags, terminal=()):
    """Hub station 0 on ``len(flags)`` lines, each with plain neighbours.

    ``flags`` lists the same-position flag per line. Lines listed in
    ``terminal`` end at the hub.
    """
    stations = [Station(0, "hub")]
    lines = []
    nid = 1
    for k, _ in enumerate(flags):
        line_id = k + 1
        if line_id in terminal:
            seq = (nid, 0)
            nid += 1
        else:
            seq = (nid, 0, nid + 1)
            nid += 2
        for s in seq:
            if s:
                stations.append(Station(s, f"s{s}"))
        runs = tuple(100 + 10 * i for i in range(len(seq) - 1))
        lines.append(Line(line_id, f"L{line_id}", seq, runs, runs))
    spec = uniform_spec(0, {k + 1: f for k, f in enumerate(flags)})
    return TransitNetwork(stations, lines, [spec])


def single_line(n=4, runs=None):
    runs = runs or tuple(60 + i for i in range(n - 1))
    stations = [Station(i, f"s{i}") for i in range(n)]
    return TransitNetwork(stations, [Line(1, "L1", tuple(range(n)), runs, runs)])


@pytest.fixture
def figure1():
    return fixture_figure1()


@pytest.fixture
def flaw():
    return fixture_method3_flaw()


@pytest.fixture
def cross():
    return fixture_cross()


@pytest.fixture
def beitucheng():
    return fixture_beitucheng()
