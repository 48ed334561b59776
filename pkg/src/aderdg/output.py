"""Deterministic file outputs: field dumps, seismograms, convergence tables.

All numeric text uses repr(float), the shortest decimal that round-trips,
so identical runs produce byte-identical files regardless of worker count.
Field dumps sample every cell at (N+1)^d uniform interior nodes, which makes
the sample lattice globally uniform and expressible as legacy-VTK
STRUCTURED_POINTS.
"""

from __future__ import annotations

import os

import numpy as np

from .basis import lagrange_eval_matrix


def _fmt(x: float) -> str:
    return repr(float(x))


def uniform_samples(solver):
    """Solution at a per-cell uniform lattice: (flat points, values, dims)."""
    n = solver.n
    offs = (np.arange(n) + 0.5) / n
    Eev = lagrange_eval_matrix(solver.basis.nodes, offs)
    mesh = solver.mesh
    if mesh.dim == 2:
        vals = np.einsum("pi,qj,eijv->epqv", Eev, Eev, solver.u)
        pts = mesh.node_grid(offs)
        ncx, ncy = mesh.counts
        vals = vals.reshape(ncx, ncy, n, n, -1).transpose(0, 2, 1, 3, 4)
        pts = pts.reshape(ncx, ncy, n, n, 2).transpose(0, 2, 1, 3, 4)
        dims = (ncx * n, ncy * n)
        return pts.reshape(-1, 2), vals.reshape(-1, vals.shape[-1]), dims
    vals = np.einsum("pi,qj,rk,eijkv->epqrv", Eev, Eev, Eev, solver.u)
    pts = mesh.node_grid(offs)
    ncx, ncy, ncz = mesh.counts
    vals = vals.reshape(ncx, ncy, ncz, n, n, n, -1).transpose(0, 3, 1, 4, 2, 5, 6)
    pts = pts.reshape(ncx, ncy, ncz, n, n, n, 3).transpose(0, 3, 1, 4, 2, 5, 6)
    dims = (ncx * n, ncy * n, ncz * n)
    return pts.reshape(-1, 3), vals.reshape(-1, vals.shape[-1]), dims


def write_field_csv(solver, path: str, var_names) -> None:
    """Plain CSV of (coordinates, variables) at the uniform sample lattice."""
    pts, vals, _ = uniform_samples(solver)
    axes = ["x", "y", "z"][: solver.mesh.dim]
    with open(path, "w") as f:
        f.write(",".join(axes + list(var_names)) + "\n")
        for p, v in zip(pts, vals):
            f.write(",".join(_fmt(c) for c in p) + ","
                    + ",".join(_fmt(c) for c in v) + "\n")


def write_field_vtk(solver, path: str, var_names) -> None:
    """Legacy-VTK STRUCTURED_POINTS (ascii) of the uniform sample lattice."""
    _, vals, dims = uniform_samples(solver)
    mesh = solver.mesh
    n = solver.n
    d = mesh.dim
    spac = [mesh.spacings[a] / n for a in range(d)]
    orig = [mesh.lo[a] + 0.5 * spac[a] for a in range(d)]
    if d == 2:
        dims = (*dims, 1)
        spac.append(spac[-1])
        orig.append(0.0)
    npts = int(np.prod(dims))
    with open(path, "w") as f:
        f.write("# vtk DataFile Version 3.0\n")
        f.write("aderdg field dump\n")
        f.write("ASCII\n")
        f.write("DATASET STRUCTURED_POINTS\n")
        f.write(f"DIMENSIONS {dims[0]} {dims[1]} {dims[2]}\n")
        f.write(f"ORIGIN {_fmt(orig[0])} {_fmt(orig[1])} {_fmt(orig[2])}\n")
        f.write(f"SPACING {_fmt(spac[0])} {_fmt(spac[1])} {_fmt(spac[2])}\n")
        f.write(f"POINT_DATA {npts}\n")
        nx = dims[0]
        ny = dims[1]
        nz = dims[2]
        for vi, name in enumerate(var_names):
            f.write(f"SCALARS {name} double 1\n")
            f.write("LOOKUP_TABLE default\n")
            col = vals[:, vi]
            if d == 2:
                arr = col.reshape(nx, ny)
                flat = arr.T.ravel()  # x fastest
            else:
                arr = col.reshape(nx, ny, nz)
                flat = arr.transpose(2, 1, 0).ravel()
            f.write("\n".join(_fmt(v) for v in flat))
            f.write("\n")


def write_seismogram_csv(path: str, times, samples, var_names) -> None:
    """Receiver trace CSV: t plus one column per variable."""
    samples = np.asarray(samples)
    with open(path, "w") as f:
        f.write(",".join(["t"] + list(var_names)) + "\n")
        for t, row in zip(times, samples):
            f.write(_fmt(t) + "," + ",".join(_fmt(v) for v in row) + "\n")


def read_csv(path: str):
    """Header list and float matrix of one of our CSV files."""
    with open(path) as f:
        header = f.readline().strip().split(",")
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    return header, data


def observed_orders(errors: np.ndarray, counts) -> np.ndarray:
    """O = log(e_coarse / e_fine) / log(n_fine / n_coarse) per refinement."""
    errors = np.asarray(errors, dtype=float)
    counts = np.asarray(counts, dtype=float)
    orders = np.full_like(errors, np.nan)
    for r in range(1, errors.shape[0]):
        with np.errstate(divide="ignore", invalid="ignore"):
            orders[r] = (np.log(errors[r - 1] / errors[r])
                         / np.log(counts[r] / counts[r - 1]))
    return orders


def write_convergence_csv(path: str, degree, counts, errors, orders,
                          var_names) -> None:
    errors = np.asarray(errors)
    orders = np.asarray(orders)
    with open(path, "w") as f:
        cols = ["N", "nx"] + [f"err_{v}" for v in var_names] \
            + [f"order_{v}" for v in var_names]
        f.write(",".join(cols) + "\n")
        for r, nx in enumerate(counts):
            row = [str(degree), str(nx)]
            row += [_fmt(e) for e in errors[r]]
            row += ["nan" if np.isnan(o) else _fmt(o) for o in orders[r]]
            f.write(",".join(row) + "\n")


def format_convergence_text(degree, counts, errors, orders, var_names) -> str:
    """Aligned text rendering of a convergence table."""
    errors = np.asarray(errors)
    orders = np.asarray(orders)
    lines = []
    head = f"{'N':>3} {'nx':>6}"
    for v in var_names:
        head += f" {'err(' + v + ')':>12} {'O(' + v + ')':>7}"
    lines.append(head)
    for r, nx in enumerate(counts):
        line = f"{degree:>3} {nx:>6}"
        for c in range(errors.shape[1]):
            o = orders[r, c]
            otxt = "  -  " if np.isnan(o) else f"{o:5.2f}"
            line += f" {errors[r, c]:>12.4e} {otxt:>7}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def ensure_dir(path: str) -> None:
    if path:
        os.makedirs(path, exist_ok=True)
