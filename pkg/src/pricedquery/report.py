"""Deterministic CSV/JSON report writing.

Rationals are written as ``a/b`` strings in verification reports and as
floats with 12 significant digits elsewhere, so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

REPORT_SCHEMA_ID = "pricedquery.report/1"

RUN_COLUMNS = ("instance", "n", "kind", "strategy", "sum_c", "inf", "eps", "B", "error",
               "expected_cost", "opt_expected", "opt_worst", "bound_ratio", "method", "seed")
VERIFY_COLUMNS = ("suite", "instance", "check", "lhs", "rhs", "holds")


def rational(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _number(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(format(float(v), ".12g"))
    if isinstance(v, float):
        return float(format(v, ".12g"))
    return v


def _cell(v):
    v = _number(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def normalize(rows, exact=()):
    """Columns named in ``exact`` become rational strings; other numbers are rounded."""
    out = []
    for row in rows:
        out.append({k: (rational(v) if k in exact and v is not None else _number(v)) for k, v in row.items()})
    return out


def render(rows, columns, fmt="csv", command="", exact=()):
    rows = normalize(rows, exact)
    if fmt == "json":
        doc = {"schema": REPORT_SCHEMA_ID, "command": command, "columns": list(columns),
               "rows": [{c: row.get(c) for c in columns} for row in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()
