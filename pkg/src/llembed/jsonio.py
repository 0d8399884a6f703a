"""Deterministic JSON serialization for run reports and manifests.

Stdlib ``json`` prints floats with the shortest round-tripping repr, which
varies in digit count; golden-file comparisons want one fixed convention.
This writer emits every float with 17 significant digits (lossless for
IEEE doubles) and two-space indentation, and otherwise produces ordinary
JSON.  Parsing stays with the stdlib.
"""

from __future__ import annotations

import json
import math

__all__ = ["format_float", "dumps", "dump"]


def format_float(x: float) -> str:
    """17-significant-digit decimal form; round-trips any IEEE double exactly."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be str, got {type(key).__name__}")
            parts.append(f"{inner}{json.dumps(key)}: {_encode(value, indent, level + 1)}")
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        parts = [f"{inner}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    # numpy scalars and similar: fall back on their Python equivalents
    if hasattr(obj, "item"):
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def dump(obj, path, indent: int = 2) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(obj, indent=indent))
