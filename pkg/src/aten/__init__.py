"""Rail shortest paths with direction-specific transfer times.

Adaptive topology expansion turns every transfer station into ordinary nodes
so that textbook Dijkstra returns exact routes; three baseline methods and a
benchmark harness are included for comparison.
"""

from .expansion import (
    ATEN,
    METHOD3,
    EdgeKind,
    ExpandedNetwork,
    NodeKind,
    TransferCase,
    build_aten,
    build_method3,
    classify_transfer_station,
    expand_station,
    predict_expansion_size,
)
from .model import (
    Direction,
    InvalidNetwork,
    Line,
    NetworkError,
    Station,
    TransferSpec,
    TransitNetwork,
    UnknownStation,
    close_transfer_times,
    neighbors,
    triangle_violations,
    validate,
)
from .solvers import (
    QueryResult,
    Unreachable,
    brute_force,
    collapse_path,
    method1,
    method2,
    method3,
    proposed,
)

__version__ = "0.1.0"
