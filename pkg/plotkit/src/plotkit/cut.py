"""1D cuts through field dumps, e.g. the free surface along y = const."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import SchemaMismatch, read_field


def plot_cut(field_csv: str, outpath: str, y: float = 0.0, var: str = None):
    """Plot one variable along the x-line nearest to the requested y.

    Water fields (with h and zb columns) default to the free surface
    h + z_b together with the bottom; other fields need an explicit var.
    """
    coords, cols = read_field(field_csv)
    if "y" not in cols or "x" not in cols:
        raise SchemaMismatch(f"{field_csv}: cut needs x and y columns")
    ys = np.unique(cols["y"])
    y_line = ys[np.abs(ys - y).argmin()]
    mask = cols["y"] == y_line
    order = np.argsort(cols["x"][mask])
    x = cols["x"][mask][order]
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    if var is None:
        if "h" not in cols or "zb" not in cols:
            raise SchemaMismatch(
                f"{field_csv}: no h/zb columns; pass an explicit variable")
        zb = cols["zb"][mask][order]
        eta = cols["h"][mask][order] + zb
        ax.plot(x, eta, "-", linewidth=1.2, label="free surface h + z_b")
        ax.plot(x, zb, "k-", linewidth=1.0, label="bottom z_b")
        ax.set_ylabel("elevation [m]")
    else:
        if var not in cols:
            raise SchemaMismatch(f"{field_csv}: no column {var!r}")
        ax.plot(x, cols[var][mask][order], "-", linewidth=1.2, label=var)
        ax.set_ylabel(var)
    ax.set_xlabel("x [m]")
    ax.set_title(f"cut along y = {y_line:g}")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    os.makedirs(os.path.dirname(outpath) or ".", exist_ok=True)
    fig.savefig(outpath, dpi=130)
    plt.close(fig)
    return outpath
