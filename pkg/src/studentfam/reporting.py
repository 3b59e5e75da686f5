"""Canonical report serialization.

JSON output is byte-reproducible: keys sorted, no whitespace, every float
rendered with 17 significant digits (enough to round-trip a double exactly),
and non-finite floats rendered as the strings "inf"/"-inf"/"nan" since JSON
has no literals for them.  Parsing an emitted document and re-serializing it
yields the identical byte string.
"""

from __future__ import annotations

import csv
import io
import json
import math

__all__ = ["canonical_json", "report_csv", "CSV_COLUMNS"]

CSV_COLUMNS = (
    "target",
    "params",
    "grid",
    "status",
    "min_margin",
    "violations",
    "evaluations",
    "wall_time_ms",
    "library_version",
)


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def canonical_json(obj) -> str:
    """Serialize to the canonical JSON form described in the module docstring."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(
            f"{json.dumps(str(k), ensure_ascii=False)}:{canonical_json(v)}"
            for k, v in items
        ) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        s = _fmt_float(value)
        return s.strip('"')
    if isinstance(value, (dict, list, tuple)):
        return canonical_json(value)
    return str(value)


def report_csv(entries: list[dict]) -> str:
    """One CSV row per (target, parameter tuple) entry."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for entry in entries:
        writer.writerow([_csv_cell(entry.get(col)) for col in CSV_COLUMNS])
    return buf.getvalue()
