"""Deterministic CSV/JSON emission: 17 significant digits, literal non-finite values."""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence


def fmt_float(v: float) -> str:
    """17 significant digits (exact round-trip); ``inf``, ``-inf``, ``nan`` literals."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def fmt_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return ""
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def to_json(obj: Any, indent: int = 2) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become strings."""
    return _encode(obj, indent, 0) + "\n"


def _encode(obj: Any, indent: int, level: int) -> str:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        text = fmt_float(obj)
        return text if math.isfinite(obj) else json.dumps(text)
    if hasattr(obj, "value") and not isinstance(obj, (list, tuple, dict)):
        return json.dumps(obj.value)
    if hasattr(obj, "tolist"):
        return _encode(obj.tolist(), indent, level)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def to_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(fmt_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
