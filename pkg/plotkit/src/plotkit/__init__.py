"""Offline figure generation from aderdg CSV artifacts."""

from .conv import fit_slope, plot_convergence
from .cut import plot_cut
from .io import SchemaMismatch, read_convergence, read_field, read_seismogram
from .seismo import TraceBundle, plot_seismograms

__all__ = [
    "SchemaMismatch",
    "TraceBundle",
    "fit_slope",
    "plot_convergence",
    "plot_cut",
    "plot_seismograms",
    "read_convergence",
    "read_field",
    "read_seismogram",
]

__version__ = "0.1.0"
