"""Deterministic CSV/JSON writers shared by every emitter.

Every CSV starts with one schema line::

    # polaract-csv schema=1 key=value ...

followed by a column header and data rows.  Floats are written with
``repr`` so values round-trip exactly; line endings are LF.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

SCHEMA_VERSION = 1


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if hasattr(value, "item"):  # numpy scalar
        return fmt(value.item())
    return str(value)


def schema_line(meta: dict) -> str:
    parts = [f"# polaract-csv schema={SCHEMA_VERSION}"]
    parts += [f"{key}={fmt(val)}" for key, val in meta.items()]
    return " ".join(parts)


def render_csv(meta: dict, columns, rows) -> str:
    lines = [schema_line(meta), ",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_csv(path, meta: dict, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(meta, columns, rows))
    return path


def read_csv(path):
    """Parse a file written by :func:`write_csv` into (meta, columns, rows)."""
    with open(path, encoding="utf-8") as fh:
        head = fh.readline().rstrip("\n")
        if not head.startswith("# polaract-csv"):
            raise ValueError(f"{path}: missing schema line")
        meta = dict(tok.split("=", 1) for tok in head.split()[2:])
        columns = fh.readline().rstrip("\n").split(",")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    return meta, columns, rows


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj))
    return path
