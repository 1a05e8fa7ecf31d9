"""Correlation metrics, gain, and the report format used by the evaluation runs."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, fields

import numpy as np

__all__ = [
    "UndefinedCorrelationError",
    "pearson",
    "spearman",
    "average_ranks",
    "gain",
    "ReportRow",
    "REPORT_COLUMNS",
    "render_report",
    "report_json",
    "read_report",
]


class UndefinedCorrelationError(ValueError):
    """Correlation is undefined (fewer than two points or zero variance)."""


def _check(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if len(x) < 2:
        raise UndefinedCorrelationError("need at least two points")
    return x, y


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _check(xs, ys)
    dx, dy = x - x.mean(), y - y.mean()
    den = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if den == 0:
        raise UndefinedCorrelationError("zero variance")
    return max(-1.0, min(1.0, float(dx @ dy) / den))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(len(v))
    sorted_v = v[order]
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average ranks (exact under ties)."""
    x, y = _check(xs, ys)
    return pearson(average_ranks(x), average_ranks(y))


def gain(poly: float, baseline: float) -> float:
    """Relative improvement ``(poly - baseline) / baseline``."""
    if baseline == 0:
        raise ZeroDivisionError("gain is undefined for a zero baseline correlation")
    return (poly - baseline) / baseline


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    baseline: str
    strategy: str
    pearson: float
    spearman: float
    gain_pearson: float
    gain_spearman: float
    pairs_scored: int
    pairs_skipped: int


REPORT_COLUMNS = tuple(f.name for f in fields(ReportRow))
_FLOATS = {"pearson", "spearman", "gain_pearson", "gain_spearman"}
_INTS = {"pairs_scored", "pairs_skipped"}


def _fmt(name: str, value) -> str:
    if name in _FLOATS:
        return "nan" if value is None or (isinstance(value, float) and math.isnan(value)) else f"{value:.4f}"
    return str(value)


def render_report(rows: Iterable[ReportRow], fmt: str = "csv") -> str:
    """CSV or markdown table with a fixed column order and 4-decimal figures."""
    rows = list(rows)
    cells = [[_fmt(c, getattr(r, c)) for c in REPORT_COLUMNS] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        w.writerows(cells)
        return buf.getvalue()
    if fmt in ("md", "markdown"):
        lines = ["| " + " | ".join(REPORT_COLUMNS) + " |", "|" + "---|" * len(REPORT_COLUMNS)]
        lines += ["| " + " | ".join(c) + " |" for c in cells]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def report_json(rows: Iterable[ReportRow]) -> str:
    """JSON array of row objects; NaN correlations become ``null``."""

    def clean(v):
        return None if isinstance(v, float) and math.isnan(v) else v

    return json.dumps([{k: clean(v) for k, v in asdict(r).items()} for r in rows], indent=2) + "\n"


def read_report(text: str) -> list[ReportRow]:
    """Parse CSV produced by :func:`render_report`, or JSON from :func:`report_json`."""
    if text.lstrip().startswith("["):
        out = []
        for rec in json.loads(text):
            if tuple(rec) != REPORT_COLUMNS:
                raise ValueError(f"unexpected report fields {list(rec)}")
            out.append(ReportRow(**{k: math.nan if v is None and k in _FLOATS else v for k, v in rec.items()}))
        return out
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
        raise ValueError(f"unexpected report header {reader.fieldnames}")
    out = []
    for rec in reader:
        kw: dict = {}
        for c in REPORT_COLUMNS:
            v = rec[c]
            kw[c] = float(v) if c in _FLOATS else int(v) if c in _INTS else v
        out.append(ReportRow(**kw))
    return out


def row_dict(row: ReportRow) -> dict:
    return asdict(row)
