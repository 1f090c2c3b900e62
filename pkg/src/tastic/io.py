"""CSV / JSON formats.

Dataset CSV: header ``id[,label],t1,...,tT``; one series per row.
Matrix CSV: ``id`` corner cell, series ids across the first row and down the
first column, full square body.
Labels CSV: ``id,label``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path

import numpy as np

from .clustering import ClusterLabels
from .dissimilarity import DissimilarityMatrix, TimeSeries


class DatasetParseError(ValueError):
    """Malformed input file; message carries the 1-based row/column."""


def fmt_float(v: float) -> str:
    # shortest repr that round-trips
    return repr(float(v))


def _open_text(path):
    if path in (None, "-"):
        raise ValueError("a file path is required")
    return open(path, newline="", encoding="utf-8")


def _parse_float(text, row, col):
    try:
        v = float(text)
    except ValueError:
        raise DatasetParseError(f"row {row}, column {col}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise DatasetParseError(f"row {row}, column {col}: non-finite value {text!r}")
    return v


def load_dataset(path):
    """Read a dataset CSV. Returns ``(series, truth)``; ``truth`` is ``None`` without a label column."""
    with _open_text(path) as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DatasetParseError("row 1: empty file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "id":
        raise DatasetParseError("row 1, column 1: header must start with 'id'")
    has_label = len(header) > 1 and header[1] == "label"
    first = 2 if has_label else 1
    T = len(header) - first
    if T < 2:
        raise DatasetParseError("row 1: need at least two time columns")
    series, labels = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DatasetParseError(
                f"row {r}: expected {len(header)} columns, found {len(row)} (series length mismatch)"
            )
        values = [_parse_float(c, r, j + 1) for j, c in enumerate(row[first:], start=first)]
        series.append(TimeSeries(row[0].strip(), np.array(values)))
        if has_label:
            labels.append(row[1].strip())
    if not series:
        raise DatasetParseError("row 2: no data rows")
    truth = ClusterLabels.from_any(labels) if has_label else None
    return series, truth


def dataset_csv(series, labels=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    T = len(series[0].values)
    head = ["id"] + (["label"] if labels is not None else []) + [f"t{i}" for i in range(1, T + 1)]
    w.writerow(head)
    for i, s in enumerate(series):
        lead = [s.id] + ([str(labels.assignments[i])] if labels is not None else [])
        w.writerow(lead + [fmt_float(v) for v in s.values])
    return buf.getvalue()


def save_dataset(path, series, labels=None):
    Path(path).write_text(dataset_csv(series, labels), encoding="utf-8")


def matrix_csv(matrix: DissimilarityMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *matrix.ids])
    for i, row in enumerate(matrix.entries):
        w.writerow([matrix.ids[i], *(fmt_float(v) for v in row)])
    return buf.getvalue()


def load_matrix(path) -> DissimilarityMatrix:
    with _open_text(path) as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:1] != ["id"]:
        raise DatasetParseError("row 1, column 1: header must start with 'id'")
    ids = tuple(rows[0][1:])
    n = len(ids)
    body = [r for r in rows[1:] if r]
    if len(body) != n:
        raise DatasetParseError(f"row {len(body) + 2}: expected {n} matrix rows, found {len(body)}")
    D = np.empty((n, n))
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise DatasetParseError(f"row {i + 2}: expected {n + 1} columns, found {len(row)}")
        D[i] = [_parse_float(c, i + 2, j + 2) for j, c in enumerate(row[1:])]
    return DissimilarityMatrix(D, method="loaded", ids=ids)


def labels_csv(ids, labels: ClusterLabels) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label"])
    for i, lab in zip(ids, labels.assignments):
        w.writerow([i, lab])
    return buf.getvalue()


def load_labels(path) -> tuple[list[str], ClusterLabels]:
    """Read labels from an ``id,label`` file or from the label column of a dataset CSV."""
    with _open_text(path) as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2 or [h.strip() for h in rows[0][:2]] != ["id", "label"]:
        raise DatasetParseError("row 1: expected a header starting with 'id,label'")
    ids, labs = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) < 2 or not row[1].strip():
            raise DatasetParseError(f"row {r}, column 2: missing label")
        ids.append(row[0].strip())
        labs.append(row[1].strip())
    return ids, ClusterLabels.from_any(labs)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


_KV = re.compile(r"^\s*([A-Za-z_][\w\-]*)\s*=\s*(.*?)\s*$")


def load_config(path) -> dict:
    """Read a JSON object or flat ``key = value`` lines (``#`` comments allowed)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config JSON must be an object")
        return data
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _KV.match(line)
        if not m:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, raw = m.groups()
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out
