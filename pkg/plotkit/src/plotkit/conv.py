"""Log-log convergence plots with fitted and reference slopes."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import SchemaMismatch, read_convergence


def fit_slope(counts, errors) -> float:
    """Least-squares slope of log error against log h (h ~ 1/counts)."""
    x = np.log(1.0 / np.asarray(counts, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    x = x - x.mean()
    return float(np.sum(x * (y - y.mean())) / np.sum(x * x))


def plot_convergence(table_csv: str, outpath: str):
    """Error-vs-h figure with per-variable fitted slopes annotated and a
    reference triangle of slope N+1; returns {var: fitted slope}."""
    degree, counts, errors, _orders = read_convergence(table_csv)
    if counts.size < 2:
        raise SchemaMismatch(f"{table_csv}: need at least two mesh levels")
    h = 1.0 / counts
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    slopes = {}
    for var, err in errors.items():
        s = fit_slope(counts, err)
        slopes[var] = s
        ax.loglog(h, err, "o-", linewidth=1.2, markersize=4,
                  label=f"{var} (fit {s:.2f})")
    # reference triangle with the theoretical slope N+1
    ref = degree + 1
    h0, h1 = h.min(), h.max()
    emax = max(err.max() for err in errors.values())
    base = emax * 2.0
    ax.loglog([h0, h1], [base * (h0 / h1) ** ref, base], "k--", linewidth=1.0)
    ax.annotate(f"slope {ref}", xy=(np.sqrt(h0 * h1),
                                    base * (np.sqrt(h0 / h1)) ** ref),
                fontsize=8, ha="left", va="bottom")
    ax.set_xlabel("h")
    ax.set_ylabel("L2 error")
    ax.grid(alpha=0.3, which="both")
    ax.legend(fontsize=8)
    fig.tight_layout()
    os.makedirs(os.path.dirname(outpath) or ".", exist_ok=True)
    fig.savefig(outpath, dpi=130)
    plt.close(fig)
    return slopes
