"""Deterministic CSV / JSON emission of result tables."""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from typing import Any, Sequence

from .explicit import EigenvalueRecord

ERROR_COLUMNS = ("n", "q", "k_explicit", "k_oracle", "eps")


def _cell(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return float(x)
    return x


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        data = [{c: _jsonable(row[c]) for c in columns} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_table(rows: Sequence[dict], columns: Sequence[str], path: str | os.PathLike | None, fmt: str = "csv") -> str:
    """Render and, when ``path`` is given, write atomically; returns the text."""
    text = render(rows, columns, fmt)
    if path is not None:
        tmp = f"{os.fspath(path)}.tmp"
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    return text


def error_rows(records: Sequence[EigenvalueRecord]) -> list[dict]:
    rows = sorted(records, key=lambda r: (r.n, r.q))
    return [
        {"n": r.n, "q": r.q, "k_explicit": r.k_explicit, "k_oracle": r.k_oracle, "eps": r.eps}
        for r in rows
    ]


def emit_error_table(records: Sequence[EigenvalueRecord], path, fmt: str = "csv") -> str:
    """Relative-error table, n-major and q-minor."""
    if not records:
        raise ValueError("no records to write")
    return write_table(error_rows(records), ERROR_COLUMNS, path, fmt)
