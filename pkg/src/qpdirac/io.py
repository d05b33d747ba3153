"""Deterministic JSON/CSV emission (17 significant digits, fixed key order)."""
from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["fmt_float", "dumps"]


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x} cannot be serialized")
    if x == 0.0:
        return "0.0"  # folds -0.0
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _emit(obj, out: list, indent: int, level: int):
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append((sep if i else "") + pad + json.dumps(str(k)) + ": ")
            _emit(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        # numeric leaves stay on one line
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items)
        out.append("[")
        for i, v in enumerate(items):
            if flat:
                out.append(", " if i else "")
            else:
                out.append((sep if i else "") + pad)
            _emit(v, out, indent, level + 1)
        out.append("]" if flat or not items else end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 1) -> str:
    """JSON text with insertion-ordered keys and 17-digit floats."""
    out: list[str] = []
    _emit(obj, out, indent, 0)
    return "".join(out) + "\n"
