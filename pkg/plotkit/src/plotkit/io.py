"""CSV readers for the documented solver artifact schemas.

plotkit never touches solver internals: everything arrives through the
seismogram CSVs (t plus one column per variable), field CSVs (coordinates
plus variables) and convergence CSVs (N, nx, err_*, order_*).
"""

from __future__ import annotations

import numpy as np


class SchemaMismatch(Exception):
    """Input CSV does not carry the expected columns."""


def read_csv(path: str):
    """Header list and float matrix (nan for empty cells)."""
    with open(path) as f:
        header = [h.strip() for h in f.readline().strip().split(",")]
        rows = []
        for line in f:
            line = line.strip()
            if not line:
                continue
            rows.append([float(tok) if tok else np.nan
                         for tok in line.split(",")])
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    data = np.asarray(rows)
    if data.shape[1] != len(header):
        raise SchemaMismatch(f"{path}: ragged rows")
    return header, data


def read_seismogram(path: str):
    """(times, {var: trace}) from a seismogram CSV."""
    header, data = read_csv(path)
    if not header or header[0] != "t":
        raise SchemaMismatch(f"{path}: first column must be t")
    times = data[:, 0]
    return times, {name: data[:, i + 1] for i, name in enumerate(header[1:])}


def read_convergence(path: str):
    """(degree, counts, {var: errors}, {var: orders}) from a table CSV."""
    header, data = read_csv(path)
    if len(header) < 3 or header[0] != "N" or header[1] != "nx":
        raise SchemaMismatch(f"{path}: expected N, nx, err_*, order_* columns")
    err_cols = [h for h in header if h.startswith("err_")]
    if not err_cols:
        raise SchemaMismatch(f"{path}: no err_* columns")
    degree = int(data[0, 0])
    counts = data[:, 1]
    errors = {h[4:]: data[:, header.index(h)] for h in err_cols}
    orders = {h[6:]: data[:, header.index(h)]
              for h in header if h.startswith("order_")}
    return degree, counts, errors, orders


def read_field(path: str):
    """(coordinate names, {var: column}) from a field CSV."""
    header, data = read_csv(path)
    coords = [h for h in header if h in ("x", "y", "z")]
    if not coords or header[: len(coords)] != coords:
        raise SchemaMismatch(f"{path}: leading coordinate columns missing")
    cols = {h: data[:, i] for i, h in enumerate(header)}
    return coords, cols
