"""Output helpers: atomic writes, CSV with a parameter header, JSON."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np


def atomic_write_text(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None if np.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def params_line(params: dict) -> str:
    return "# params: " + json.dumps(_plain(params), sort_keys=True)


def csv_text(header, rows, params=None) -> str:
    buf = io.StringIO()
    if params is not None:
        buf.write(params_line(params) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def write_csv(path, header, rows, params=None):
    atomic_write_text(path, csv_text(header, rows, params))


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    atomic_write_text(path, json_text(obj))


def read_csv(path):
    """Return ``(params, header, rows)``; ``params`` comes from a leading ``# params:`` line."""
    params = None
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# params: ") and params is None and not body:
            params = json.loads(line[len("# params: "):])
        elif line.startswith("#") or not line.strip():
            continue
        else:
            body.append(line)
    reader = csv.reader(body)
    rows = list(reader)
    if not rows:
        return params, [], []
    return params, rows[0], rows[1:]
