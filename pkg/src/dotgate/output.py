"""Deterministic CSV and JSON writers.

All floats are printed with 12 significant digits and files use LF line
endings, so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import math
from pathlib import Path


def fmt(value) -> str:
    """Format one cell: floats at 12 significant digits, rest as str."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def json_dumps(obj, indent: int = 0) -> str:
    """Minimal JSON serializer with fixed float formatting and sorted keys."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int,)):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return "NaN"
        return f"{obj:.12g}"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, dict):
        items = [f'{pad}  "{k}": {json_dumps(obj[k], indent + 2).lstrip()}'
                 for k in sorted(obj)]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        items = [f"{pad}  {json_dumps(v, indent + 2).lstrip()}" for v in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_dumps(obj) + "\n", newline="\n")
