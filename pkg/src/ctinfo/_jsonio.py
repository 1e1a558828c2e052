"""JSON output shared by the CLI and the erratum report.

Floats are written with 17 significant digits; non-finite values become the
strings ``"inf"``, ``"-inf"`` and ``"nan"`` so the document stays valid JSON.

>>> print(dumps({"a": float("inf"), "b": [0.1]}, indent=0))
{
"a": "inf",
"b": [
0.10000000000000001
]
}
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["dumps"]


def _num(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return f"{v:.17g}"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with 17-significant-digit floats and quoted non-finite values."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
