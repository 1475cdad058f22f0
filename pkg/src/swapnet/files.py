"""Canonical JSON instance files.

The canonical form sorts each edge as [u, v] with u < v, sorts the edge
lists, and emits keys in sorted order, so emitting is idempotent: parsing
a canonical file and re-emitting it reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import InstanceFormatError
from .model import CostVersion, GameInstance, validate_instance

_REQUIRED = ("version", "n", "connection_edges", "interest_edges")


def instance_to_dict(inst: GameInstance, metadata: dict | None = None) -> dict[str, Any]:
    data: dict[str, Any] = {
        "version": inst.version.value,
        "n": inst.n,
        "connection_edges": [list(e) for e in sorted(inst.connection_edges)],
        "interest_edges": [list(e) for e in sorted(inst.interest_edges)],
    }
    if metadata is not None:
        data["metadata"] = metadata
    return data


def instance_from_dict(data: Any) -> tuple[GameInstance, dict | None]:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    missing = [key for key in _REQUIRED if key not in data]
    if missing:
        raise InstanceFormatError(f"instance file is missing keys: {', '.join(missing)}")
    try:
        version = CostVersion(data["version"])
    except ValueError:
        raise InstanceFormatError(
            f"version must be 'MAX' or 'AVG', got {data['version']!r}"
        ) from None
    n = data["n"]
    if not isinstance(n, int):
        raise InstanceFormatError(f"n must be an integer, got {n!r}")

    def as_edges(key: str) -> list[tuple[int, int]]:
        raw = data[key]
        if not isinstance(raw, list):
            raise InstanceFormatError(f"{key} must be a list of [u, v] pairs")
        edges = []
        for item in raw:
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not all(isinstance(x, int) for x in item)
            ):
                raise InstanceFormatError(f"{key} entry {item!r} is not an [u, v] pair")
            edges.append((item[0], item[1]))
        return edges

    inst = GameInstance.from_edges(n, as_edges("connection_edges"), as_edges("interest_edges"), version)
    report = validate_instance(inst)
    if not report.is_valid:
        raise InstanceFormatError("invalid instance: " + "; ".join(report.violations))
    return inst, data.get("metadata")


def dumps_instance(inst: GameInstance, metadata: dict | None = None) -> str:
    return json.dumps(instance_to_dict(inst, metadata), indent=2, sort_keys=True) + "\n"


def loads_instance(text: str) -> tuple[GameInstance, dict | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from exc
    return instance_from_dict(data)


def save_instance(path: str | Path, inst: GameInstance, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps_instance(inst, metadata))


def load_instance(path: str | Path) -> tuple[GameInstance, dict | None]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    return loads_instance(text)
