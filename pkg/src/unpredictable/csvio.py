"""Deterministic CSV and JSON writers.

CSV output is RFC-4180 style: header row, comma separated, dot decimals,
LF line endings. Floats are written with repr (shortest round-trip form),
so identical inputs yield byte-identical files.
"""

import json

import numpy as np


def format_value(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    x = float(v)
    if np.isnan(x):
        return "nan"
    return repr(x)


def write_columns(path, header, columns):
    """Write equal-length columns under the given header."""
    columns = [np.asarray(c) for c in columns]
    if len(header) != len(columns):
        raise ValueError("csvio.write_columns: header/column count mismatch")
    n = columns[0].shape[0] if columns else 0
    for c in columns:
        if c.shape[0] != n:
            raise ValueError("csvio.write_columns: ragged columns")
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(n):
            fh.write(",".join(format_value(c[k]) for c in columns) + "\n")


def read_columns(path):
    """Read a numeric CSV written by write_columns; returns (header, list of float arrays)."""
    with open(path, "r") as fh:
        lines = [ln.rstrip("\n").rstrip("\r") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"csvio.read_columns: {path} is empty")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    cols = [np.array([float(r[j]) for r in rows]) for j in range(len(header))]
    return header, cols


def write_json(path, obj):
    """Write a JSON document with stable (insertion) key order and LF ending."""
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(obj, indent=2))
        fh.write("\n")


def jsonable(x):
    """Recursively convert numpy scalars/arrays to plain python for json.dumps."""
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x
