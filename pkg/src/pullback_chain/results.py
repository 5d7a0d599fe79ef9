"""CSV/JSON writers and the matching reader for command output tables.

Floats are written with 17 significant digits so every value round-trips.
Infinite values are written as ``inf`` in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

SCHEMA_VERSION = 1


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(command: str, columns: list[str], rows: list[list], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "columns": columns,
            "rows": [[_json_value(v) for v in r] for r in rows],
        }
        return json.dumps(doc, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_table(directory, command: str, columns, rows, fmt: str = "csv") -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{command}.{fmt}"
    path.write_text(render(command, list(columns), rows, fmt), encoding="utf-8")
    return path


def _parse_cell(s: str):
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_table(path) -> tuple[list[str], list[list]]:
    """Read a file written by :func:`write_table`; returns ``(columns, rows)``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
        rows = [[math.inf if v is None else v for v in r] for r in doc["rows"]]
        return doc["columns"], rows
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    return columns, [[_parse_cell(c) for c in r] for r in reader]
