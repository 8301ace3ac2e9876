"""CSV and JSON output for run reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from pathlib import Path

from .runner import RunReport

CSV_HEADER = (
    "access_index",
    "key",
    "cost",
    "z",
    "leaves",
    "l_left",
    "l_right",
    "phi_before",
    "phi_after",
    "slack_lemma1",
    "slack_lemma2",
    "slack_zigzag",
    "slack_theorem",
    "lost_min_ratio",
    "gained_max",
)


def _clean(obj):
    """NaN and infinities become ``null`` so the JSON stays standard."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for rec in report.rows:
        d = asdict(rec)
        wr.writerow([repr(d[h]) if isinstance(d[h], float) else d[h] for h in CSV_HEADER])
    return buf.getvalue()


def to_json(report: RunReport) -> str:
    return json.dumps(_clean(report.to_dict()), sort_keys=True, allow_nan=False)


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, allow_nan=False, indent=2)


def emit(report: RunReport, fmt: str, path) -> Path:
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "json":
        text = to_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(path)
    path.write_text(text)
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
