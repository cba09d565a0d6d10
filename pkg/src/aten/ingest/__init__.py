"""Network files, fixture networks, and the synthetic generator."""

from .fileio import SchemaError, dumps, loads, read_network, write_network
from .fixtures import FIXTURES, fixture_beitucheng, fixture_cross, fixture_figure1, fixture_method3_flaw
from .generator import GenerationError, GenParams, find_witnesses, generate, params_from_dict, preset, PRESETS

__all__ = [
    "FIXTURES",
    "GenParams",
    "GenerationError",
    "PRESETS",
    "SchemaError",
    "dumps",
    "find_witnesses",
    "fixture_beitucheng",
    "fixture_cross",
    "fixture_figure1",
    "fixture_method3_flaw",
    "generate",
    "loads",
    "params_from_dict",
    "preset",
    "read_network",
    "write_network",
]
