"""Canonical JSON-lines-style network files.

One record per line inside each array, top-level keys sorted, records sorted
by id/key, so ``write(read(f)) == f`` byte for byte and diffs stay readable.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from ..model import Direction, InvalidNetwork, Line, NetworkError, Station, TransferSpec, TransitNetwork, validate

SCHEMA_VERSION = "aten-network/1"


class SchemaError(NetworkError):
    pass


def _record(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(required or props),
        "additionalProperties": False,
    }


_int = {"type": "integer"}
_dir = {"type": "integer", "enum": [0, 1, 2]}
_ints = {"type": "array", "items": _int}

NETWORK_SCHEMA = _record(
    {
        "schema": {"const": SCHEMA_VERSION},
        "stations": {"type": "array", "items": _record({"id": _int, "name": {"type": "string"}})},
        "lines": {
            "type": "array",
            "items": _record(
                {"id": _int, "name": {"type": "string"}, "stations": _ints, "run_up": _ints, "run_down": _ints}
            ),
        },
        "platforms": {
            "type": "array",
            "items": _record({"station": _int, "line": _int, "same_position": {"type": "boolean"}}),
        },
        "transfer_times": {
            "type": "array",
            "items": _record(
                {"station": _int, "from_line": _int, "from_dir": _dir, "to_line": _int, "to_dir": _dir, "seconds": _int}
            ),
        },
    }
)


def to_document(net: TransitNetwork) -> dict:
    platforms = []
    times = []
    for sid, spec in sorted(net.transfers.items()):
        for line, same in sorted(spec.same_position.items()):
            platforms.append({"station": sid, "line": line, "same_position": bool(same)})
        for (a, b, c, d), secs in sorted(spec.times.items()):
            times.append(
                {"station": sid, "from_line": a, "from_dir": int(b), "to_line": c, "to_dir": int(d), "seconds": secs}
            )
    return {
        "schema": SCHEMA_VERSION,
        "stations": [{"id": s.id, "name": s.name} for s in sorted(net.stations.values(), key=lambda s: s.id)],
        "lines": [
            {
                "id": ln.id,
                "name": ln.name,
                "stations": list(ln.stations),
                "run_up": list(ln.run_up),
                "run_down": list(ln.run_down),
            }
            for ln in sorted(net.lines.values(), key=lambda ln: ln.id)
        ],
        "platforms": platforms,
        "transfer_times": times,
    }


def from_document(doc: dict) -> TransitNetwork:
    """Build a network from a parsed document; schema-checked, not validated."""
    validator = jsonschema.Draft202012Validator(NETWORK_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for err in errors:
            where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path) or "<root>"
            msgs.append(f"{where}: {err.message}")
        raise SchemaError("; ".join(msgs))
    stations = [Station(s["id"], s["name"]) for s in doc["stations"]]
    lines = [Line(x["id"], x["name"], x["stations"], x["run_up"], x["run_down"]) for x in doc["lines"]]
    flags: dict[int, dict[int, bool]] = {}
    for p in doc["platforms"]:
        flags.setdefault(p["station"], {})[p["line"]] = p["same_position"]
    times: dict[int, dict] = {}
    for t in doc["transfer_times"]:
        key = (t["from_line"], Direction(t["from_dir"]), t["to_line"], Direction(t["to_dir"]))
        times.setdefault(t["station"], {})[key] = t["seconds"]
    for sid in times:
        if sid not in flags:
            raise SchemaError(f"transfer_times: station {sid} has times but no platforms entry")
    specs = [TransferSpec(sid, flags[sid], times.get(sid, {})) for sid in sorted(flags)]
    return TransitNetwork(stations, lines, specs)


def dumps(net: TransitNetwork) -> str:
    doc = to_document(net)
    parts = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, list):
            if value:
                rows = ",\n".join("  " + json.dumps(r, sort_keys=True) for r in value)
                parts.append(f'"{key}": [\n{rows}\n]')
            else:
                parts.append(f'"{key}": []')
        else:
            parts.append(f'"{key}": {json.dumps(value)}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def loads(text: str, check: bool = True) -> TransitNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    net = from_document(doc)
    if check:
        report = validate(net)
        if not report.ok:
            raise InvalidNetwork(report)
    return net


def read_network(path, check: bool = True) -> TransitNetwork:
    return loads(Path(path).read_text(encoding="utf-8"), check=check)


def write_network(net: TransitNetwork, path) -> None:
    net.require_valid()
    Path(path).write_text(dumps(net), encoding="utf-8")
