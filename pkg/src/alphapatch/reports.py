"""Tabular scan reports, deterministic CSV/JSON output, worker pool helper.

Report files must be byte-identical across runs with the same inputs, so no
wall-clock data ever goes into a CSV and floats are written with a fixed
17-significant-digit format.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InvalidSpecError

FLOAT_FMT = "%.17g"


class ScanReport:
    """Named columns of scalar results from a parameter scan."""

    def __init__(self, columns, rows=None, meta=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows] if rows is not None else []
        self.meta = dict(meta) if meta else {}

    def add_row(self, *values, **named):
        if named:
            if values:
                raise InvalidSpecError("pass row values positionally or by name, not both")
            values = [named.pop(c) for c in self.columns]
            if named:
                raise InvalidSpecError("unknown columns: %s" % sorted(named))
        if len(values) != len(self.columns):
            raise InvalidSpecError(
                "row has %d values, report has %d columns" % (len(values), len(self.columns))
            )
        self.rows.append([float(v) for v in values])

    def column(self, name):
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows])

    def __len__(self):
        return len(self.rows)

    def to_csv(self, path):
        lines = [",".join(self.columns)]
        for r in self.rows:
            lines.append(",".join(FLOAT_FMT % v for v in r))
        text = "\n".join(lines) + "\n"
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return path

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
        cols = lines[0].split(",")
        rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        return cls(cols, rows)


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, inputs, output_paths):
    """JSON manifest: run inputs plus SHA-256 digest of each output file."""
    doc = {
        "format": "alphapatch-manifest v1",
        "inputs": inputs,
        "outputs": {os.path.basename(p): sha256_of(p) for p in output_paths},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_manifest(path):
    with open(path) as fh:
        return json.load(fh)


def worker_count(workers=None):
    """Resolve the worker count: explicit arg, then APL_WORKERS, then 1."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("APL_WORKERS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def map_ordered(fn, items, workers=None):
    """Apply fn over items, preserving order; thread pool when workers > 1.

    Results are identical to a serial map: parallelism only reorders the
    wall-clock schedule, never the output sequence.
    """
    items = list(items)
    w = worker_count(workers)
    if w == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, items))
