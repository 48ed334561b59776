"""Seismogram overlays: one figure per variable, one curve per input run."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import SchemaMismatch, read_seismogram

LINESTYLES = ("-", "--", "-.", ":")


@dataclass
class TraceBundle:
    """Labelled seismogram CSVs sharing one variable-column schema."""

    traces: list  # (label, path) pairs
    variables: list = field(default_factory=list)  # empty: all shared columns

    def load(self):
        loaded = []
        schema = None
        for label, path in self.traces:
            times, cols = read_seismogram(path)
            names = list(cols.keys())
            if schema is None:
                schema = names
            elif names != schema:
                raise SchemaMismatch(
                    f"{path}: columns {names} differ from {schema}")
            loaded.append((label, times, cols))
        if not loaded:
            raise SchemaMismatch("bundle holds no traces")
        wanted = self.variables or schema
        missing = [v for v in wanted if v not in schema]
        if missing:
            raise SchemaMismatch(f"requested columns missing: {missing}")
        return loaded, wanted


def plot_seismograms(bundle: TraceBundle, outdir: str, prefix: str = "seismo"):
    """Write one time-series overlay per variable; returns the file list."""
    loaded, variables = bundle.load()
    os.makedirs(outdir, exist_ok=True)
    written = []
    for var in variables:
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        for i, (label, times, cols) in enumerate(loaded):
            ax.plot(times, cols[var], LINESTYLES[i % len(LINESTYLES)],
                    linewidth=1.2, label=label)
        ax.set_xlabel("t [s]")
        ax.set_ylabel(var)
        ax.grid(alpha=0.3)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = os.path.join(outdir, f"{prefix}_{var}.png")
        fig.savefig(path, dpi=130)
        plt.close(fig)
        written.append(path)
    return written
