"""Stable serialization of results: JSON envelope, CSV tables, text rendering.

JSON floats use Python's shortest round-trip representation (exact to the
last bit on re-parse); text rendering truncates to 7 significant digits.
Reports contain no timestamps or environment data, so identical configs
serialize to identical bytes.
"""

import csv
import io
import json
from dataclasses import asdict
from fractions import Fraction
from typing import Optional

import numpy as np

from .analyze import Check, CheckReport
from .optimize import ConstantEstimate

SCHEMA_ID = "njconst-report/1"

CHECK_COLUMNS = [
    "name",
    "status",
    "observed",
    "expected",
    "tolerance",
    "provenance",
    "detail",
]
TABLE_COLUMNS = [
    "n",
    "p",
    "d",
    "kind",
    "oracle_lo",
    "oracle_hi",
    "estimate",
    "gap",
    "tolerance",
    "status",
    "method",
    "provenance",
]
COMPUTE_COLUMNS = [
    "value",
    "kind",
    "p",
    "dim",
    "n",
    "method",
    "bound_status",
    "restarts_used",
    "iterations_total",
    "seed",
]


def to_jsonable(obj):
    """Recursively convert numpy/Fraction/dataclass values to JSON types."""
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, Check):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def envelope(command: str, config: dict, result: dict) -> dict:
    return {
        "schema": SCHEMA_ID,
        "command": command,
        "config": to_jsonable(config),
        "result": to_jsonable(result),
    }


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def fmt7(x) -> str:
    """7-significant-digit display form."""
    if x is None:
        return ""
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(fmt7(v) for v in x) + "]"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".7g")


def estimate_result(est: ConstantEstimate, space, n: int) -> dict:
    return {
        "value": est.value,
        "certificate": est.certificate,
        "kind": est.kind,
        "method": est.method,
        "bound_status": est.bound_status,
        "restarts_used": est.restarts_used,
        "iterations_total": est.iterations_total,
        "seed": est.seed,
        "space": {"p": space.p_label, "dim": space.dim},
        "n": n,
        "provenance": f"estimate:{est.method}",
    }


def check_report_result(rep: CheckReport) -> dict:
    result = {
        "checks": [to_jsonable(c) for c in rep.checks],
        "summary": {"pass": rep.n_pass, "fail": rep.n_fail, "skip": rep.n_skip},
    }
    if rep.table is not None:
        result["table"] = to_jsonable(rep.table)
    return result


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple, np.ndarray)):
        return ";".join(repr(float(x)) for x in np.asarray(v).ravel())
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_from_rows(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def check_report_csv(rep: CheckReport) -> str:
    """Checks (and table rows, if present) as CSV with fixed column order."""
    parts = []
    if rep.checks:
        rows = [to_jsonable(c) for c in rep.checks]
        parts.append(_csv_from_rows(CHECK_COLUMNS, rows))
    if rep.table:
        parts.append(_csv_from_rows(TABLE_COLUMNS, rep.table))
    return "".join(parts)


def estimate_csv(est: ConstantEstimate, space, n: int) -> str:
    row = {
        "value": est.value,
        "kind": est.kind,
        "p": space.p_label,
        "dim": space.dim,
        "n": n,
        "method": est.method,
        "bound_status": est.bound_status,
        "restarts_used": est.restarts_used,
        "iterations_total": est.iterations_total,
        "seed": est.seed,
    }
    return _csv_from_rows(COMPUTE_COLUMNS, [row])


def check_report_text(rep: CheckReport) -> str:
    lines = []
    for c in rep.checks:
        lines.append(
            f"[{c.status:>4}] {c.name}: observed={fmt7(c.observed)} "
            f"expected={fmt7(c.expected)} tol={fmt7(c.tolerance)}"
        )
    for row in rep.table or []:
        lines.append(
            f"[{row['status']:>4}] n={row['n']} p={row['p']} d={row['d']} "
            f"{row['kind']}: oracle=[{fmt7(row['oracle_lo'])}, "
            f"{fmt7(row['oracle_hi'])}] estimate={fmt7(row['estimate'])} "
            f"gap={fmt7(row['gap'])}"
        )
    lines.append(
        f"summary: pass={rep.n_pass} fail={rep.n_fail} skip={rep.n_skip}"
    )
    return "\n".join(lines) + "\n"


def estimate_text(est: ConstantEstimate, space, n: int) -> str:
    lines = [
        f"space: l_{space.dim}^{space.p_label}, n={n}, kind={est.kind}",
        f"value: {fmt7(est.value)} ({est.bound_status}, method={est.method})",
        f"certificate: {fmt7([list(r) for r in est.certificate])}",
        f"restarts={est.restarts_used} iterations={est.iterations_total} "
        f"seed={est.seed}",
    ]
    return "\n".join(lines) + "\n"
