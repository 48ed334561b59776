"""Common interface of the hyperbolic systems handled by the solver.

Every model provides the ingredients of the unified first-order form

    d_t Q + div F(Q) + B(Q) . grad Q = S(Q)

as pure functions of the point state: the flux tensor, the non-conservative
product action, the algebraic source, and an upper bound on the directional
signal speed.  All operations are free of side effects and safe to call
concurrently.
"""

from __future__ import annotations

import numpy as np


class HyperbolicModel:
    """Abstract model: concrete systems fill in the pointwise operations."""

    #: number of conserved variables
    n_vars: int
    #: number of space dimensions
    dim: int
    #: canonical variable names, fixed ordering used by all file outputs
    var_names: tuple[str, ...]
    #: True when flux, ncp and source are all linear in Q (fixed gradients)
    is_linear: bool

    def validate_state(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape[-1] != self.n_vars:
            raise ValueError(f"state needs {self.n_vars} variables, got {q.shape[-1]}")
        if not np.all(np.isfinite(q)):
            raise ValueError("state contains non-finite entries")
        return q

    def flux(self, q: np.ndarray) -> np.ndarray:
        """Flux tensor F(Q), shape (n_vars, dim)."""
        raise NotImplementedError

    def ncp(self, q: np.ndarray, grads: np.ndarray) -> np.ndarray:
        """B(Q) . grad Q for gradients stacked as (dim, n_vars)."""
        raise NotImplementedError

    def source(self, q: np.ndarray) -> np.ndarray:
        """Algebraic source S(Q)."""
        raise NotImplementedError

    def max_signal_speed(self, q: np.ndarray, n: np.ndarray) -> float:
        """Upper bound on |eigenvalues| of (dF/dQ + B) . n at Q."""
        raise NotImplementedError

    def bn_matvec(self, q: np.ndarray, dq: np.ndarray, n: np.ndarray) -> np.ndarray:
        """(B(Q) . n) dq - the building block of the path-conservative jump."""
        raise NotImplementedError
