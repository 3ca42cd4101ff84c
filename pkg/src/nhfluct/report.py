"""Report serialization: ``report.json`` and ``summary.csv``.

Complex numbers are written to JSON as ``{"re": ..., "im": ...}`` and to CSV
as ``a`` (real) or ``a+bj``. Floats use ``repr`` so values survive a
parse/serialize round trip unchanged; non-finite values become ``null`` /
empty fields. The JSON layout is described by ``report.schema.json``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import platform
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .harness import Report

SCHEMA_ID = "nhfluct.report/1"
CSV_FIELDS = (
    "n",
    "statistic",
    "mean",
    "variance",
    "stderr",
    "theory",
    "abs_dev",
    "rel_dev",
    "p_value",
    "guard_rejects",
    "trials",
)


def code_hash() -> str:
    """SHA-256 over the package sources, in sorted path order."""
    h = hashlib.sha256()
    root = Path(__file__).parent
    for p in sorted(root.glob("*.py")):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()


def _real(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cplx(z):
    if z is None:
        return None
    z = complex(z)
    return {"re": _real(z.real), "im": _real(z.imag)}


def report_to_dict(report: Report) -> dict:
    rows = []
    for r in report.rows:
        rows.append(
            {
                "n": int(r.n),
                "statistic": r.statistic,
                "kind": r.kind,
                "trials": int(r.trials),
                "accepted": int(r.accepted),
                "guard_rejects": int(r.guard_rejects),
                "mean": _cplx(r.mean),
                "variance": _real(r.variance),
                "second_moment": _real(r.second_moment),
                "stderr": _real(r.stderr),
                "var_stderr": _real(r.var_stderr),
                "theory": _cplx(r.theory),
                "theory_field": r.theory_field,
                "abs_dev": _real(r.abs_dev),
                "rel_dev": _real(r.rel_dev),
                "ks_distance": _real(r.ks_distance),
                "p_value": _real(r.p_value),
                "min": _real(r.min),
                "max": _real(r.max),
            }
        )
    cross = [
        {
            "n": int(c.n),
            "a": c.a,
            "b": c.b,
            "covariance": _cplx(c.covariance),
            "stderr": _real(c.stderr),
            "theory": _cplx(c.theory),
            "z_score": _real(c.cross_z),
        }
        for c in report.cross
    ]
    meta = {
        "version": __version__,
        "code_hash": code_hash(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    meta.update(report.metadata)
    return {
        "schema": SCHEMA_ID,
        "config": report.config,
        "rows": rows,
        "cross": cross,
        "checks": [{"name": c.name, "passed": bool(c.passed), "detail": c.detail} for c in report.checks],
        "passed": bool(report.passed),
        "metadata": meta,
    }


def dumps_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("nhfluct").joinpath("report.schema.json").read_text())


def _csv_num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    z = complex(v)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return ""
    if z.imag == 0:
        return repr(float(z.real))
    sign = "+" if z.imag >= 0 else "-"
    return f"{float(z.real)!r}{sign}{abs(float(z.imag))!r}j"


def summary_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in report.rows:
        w.writerow(
            [
                str(r.n),
                r.statistic,
                _csv_num(r.mean),
                _csv_num(r.variance),
                _csv_num(r.stderr),
                _csv_num(r.theory),
                _csv_num(r.abs_dev),
                _csv_num(r.rel_dev),
                _csv_num(r.p_value),
                str(r.guard_rejects),
                str(r.trials),
            ]
        )
    return buf.getvalue()


def write_report(report: Report, out_dir, fmt: str = "both"):
    """Write ``report.json`` and/or ``summary.csv`` into ``out_dir``; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt in ("json", "both"):
        p = out / "report.json"
        p.write_text(dumps_json(report_to_dict(report)), encoding="utf-8")
        paths.append(p)
    if fmt in ("csv", "both"):
        p = out / "summary.csv"
        p.write_text(summary_csv(report), encoding="utf-8", newline="")
        paths.append(p)
    return paths
