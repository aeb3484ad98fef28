"""Canonical JSON text: stable key order, exact integers, 17-digit floats.

Rationals are written as "p/q" strings and non-finite floats as strings, so
parsing the output with ``json.loads`` and writing it again reproduces the
same text byte for byte.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def normalize(obj):
    """Convert numpy scalars/arrays, tuples and Fractions into plain JSON values."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [normalize(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [normalize(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    return obj


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = format(x, ".17g")
    return text


def _write(obj, indent: int | None, level: int, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float_text(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if indent is None or all(not isinstance(x, (list, dict)) for x in obj):
            out.append("[")
            for i, x in enumerate(obj):
                if i:
                    out.append(", ")
                _write(x, None, 0, out)
            out.append("]")
            return
        pad = " " * (indent * (level + 1))
        out.append("[\n")
        for i, x in enumerate(obj):
            out.append(pad)
            _write(x, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(" " * (indent * level) + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        if indent is None:
            out.append("{")
            for i, (k, v) in enumerate(obj.items()):
                if i:
                    out.append(", ")
                out.append(json.dumps(k) + ": ")
                _write(v, None, 0, out)
            out.append("}")
            return
        pad = " " * (indent * (level + 1))
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(k) + ": ")
            _write(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(" " * (indent * level) + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    out: list[str] = []
    _write(normalize(obj), indent, 0, out)
    return "".join(out)


def loads(text: str):
    return json.loads(text)
