"""Hyperbolic reformulation of the Serre-Green-Naghdi / Sainte-Marie models.

Depth-averaged two-dimensional system with six conserved variables

    Q = (h, h*u1, h*u2, h*w, h*p, z_b)

where h is the water depth, u = (u1, u2) the horizontal velocity, w the
averaged vertical velocity, p the non-hydrostatic pressure correction and
z_b the (steady) bottom elevation.  The model selector gamma is 3/2 for the
SGN closure and 2 for the SM closure; c is the artificial sound speed of the
relaxation, c = alpha*sqrt(g*H0).

The bottom is carried as a conserved variable with zero flux and source so
that the DG polynomials provide its gradients to the non-conservative terms;
its row never updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import NonPositiveDepth
from .base import HyperbolicModel

N_VARS = 6
#: dry guard relative to the still water depth
H_FLOOR_REL = 1e-10


@dataclass(frozen=True)
class HsgnParams:
    """Immutable parameter set of the hyperbolic SGN/SM system."""

    g: float = 9.81
    gamma: float = 1.5
    c: float = 20.0
    h0: float = 1.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("artificial sound speed must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.h0 <= 0:
            raise ValueError("still water depth must be positive")

    @classmethod
    def from_alpha(cls, alpha: float, g: float = 9.81, h0: float = 1.0,
                   gamma: float = 1.5) -> "HsgnParams":
        """Build with c = alpha*sqrt(g*H0)."""
        return cls(g=g, gamma=gamma, c=alpha * math.sqrt(g * h0), h0=h0)

    @property
    def h_floor(self) -> float:
        return H_FLOOR_REL * self.h0


@njit(cache=True)
def hsgn_flux_kernel(q, g, c, out):
    """Flux tensor, out shape (6, 2)."""
    h = q[0]
    u1 = q[1] / h
    u2 = q[2] / h
    p = q[4] / h
    hyd = 0.5 * g * h * h + q[4]
    out[0, 0] = q[1]
    out[0, 1] = q[2]
    out[1, 0] = q[1] * u1 + hyd
    out[1, 1] = q[1] * u2
    out[2, 0] = q[2] * u1
    out[2, 1] = q[2] * u2 + hyd
    out[3, 0] = q[3] * u1
    out[3, 1] = q[3] * u2
    out[4, 0] = q[1] * (p + c * c)
    out[4, 1] = q[2] * (p + c * c)
    out[5, 0] = 0.0
    out[5, 1] = 0.0


@njit(cache=True)
def hsgn_ncp_kernel(q, gx, gy, g, gamma, c, out):
    """B(Q) . grad Q for gradient vectors gx, gy."""
    h = q[0]
    u1 = q[1] / h
    u2 = q[2] / h
    p = q[4] / h
    coef = g * h + gamma * p
    out[0] = 0.0
    out[1] = coef * gx[5]
    out[2] = coef * gy[5]
    out[3] = 0.0
    out[4] = c * c * (-u1 * gx[0] - u2 * gy[0] - 2.0 * (u1 * gx[5] + u2 * gy[5]))
    out[5] = 0.0


@njit(cache=True)
def hsgn_source_kernel(q, gamma, c, out):
    h = q[0]
    w = q[3] / h
    p = q[4] / h
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    out[3] = gamma * p
    out[4] = -2.0 * c * c * w
    out[5] = 0.0


@njit(cache=True)
def hsgn_smax_kernel(q, nx, ny, g, c):
    """Signal-speed bound |u.n| + sqrt(g h + c^2 + 2|p|)."""
    h = q[0]
    un = (q[1] * nx + q[2] * ny) / h
    p = q[4] / h
    return abs(un) + math.sqrt(g * h + c * c + 2.0 * abs(p))


@njit(cache=True)
def hsgn_bn_matvec_kernel(q, dq, nx, ny, g, gamma, c, out):
    """(B(Q) . n) dq."""
    h = q[0]
    un = (q[1] * nx + q[2] * ny) / h
    p = q[4] / h
    coef = g * h + gamma * p
    out[0] = 0.0
    out[1] = nx * coef * dq[5]
    out[2] = ny * coef * dq[5]
    out[3] = 0.0
    out[4] = -c * c * un * (dq[0] + 2.0 * dq[5])
    out[5] = 0.0


class Hsgn(HyperbolicModel):
    """Hyperbolic SGN/SM model in two space dimensions."""

    n_vars = N_VARS
    dim = 2
    var_names = ("h", "hu1", "hu2", "hw", "hp", "zb")
    is_linear = False

    def __init__(self, params: HsgnParams):
        self.params = params

    def _check_depth(self, q) -> None:
        if q[..., 0].min() <= self.params.h_floor:
            raise NonPositiveDepth(
                f"h <= h_floor = {self.params.h_floor}"
            )

    def flux(self, q):
        q = self.validate_state(q)
        self._check_depth(q)
        out = np.empty((N_VARS, 2))
        hsgn_flux_kernel(q, self.params.g, self.params.c, out)
        return out

    def ncp(self, q, grads):
        q = self.validate_state(q)
        self._check_depth(q)
        grads = np.asarray(grads, dtype=float)
        out = np.empty(N_VARS)
        hsgn_ncp_kernel(q, grads[0], grads[1], self.params.g,
                        self.params.gamma, self.params.c, out)
        return out

    def source(self, q):
        q = self.validate_state(q)
        self._check_depth(q)
        out = np.empty(N_VARS)
        hsgn_source_kernel(q, self.params.gamma, self.params.c, out)
        return out

    def max_signal_speed(self, q, n):
        q = self.validate_state(q)
        self._check_depth(q)
        return hsgn_smax_kernel(q, n[0], n[1], self.params.g, self.params.c)

    def bn_matvec(self, q, dq, n):
        q = self.validate_state(q)
        self._check_depth(q)
        out = np.empty(N_VARS)
        hsgn_bn_matvec_kernel(q, np.asarray(dq, dtype=float), n[0], n[1],
                              self.params.g, self.params.gamma, self.params.c, out)
        return out

    def primitives(self, q):
        """(h, u1, u2, w, p, z_b) from the conserved state."""
        q = self.validate_state(q)
        self._check_depth(q)
        h = q[..., 0]
        return np.stack(
            [h, q[..., 1] / h, q[..., 2] / h, q[..., 3] / h, q[..., 4] / h,
             q[..., 5]], axis=-1)

    @staticmethod
    def pack(prim):
        """Inverse of primitives."""
        prim = np.asarray(prim, dtype=float)
        h = prim[..., 0]
        return np.stack(
            [h, h * prim[..., 1], h * prim[..., 2], h * prim[..., 3],
             h * prim[..., 4], prim[..., 5]], axis=-1)

    def directional_jacobian(self, q, n, eps: float = 1e-7) -> np.ndarray:
        """(dF/dQ + B) . n at Q, flux part by central finite differences.

        Test/diagnostic helper; the solver itself never forms Jacobians.
        """
        q = self.validate_state(q)
        g, c, gamma = self.params.g, self.params.c, self.params.gamma
        jac = np.zeros((N_VARS, N_VARS))
        fp = np.empty((N_VARS, 2))
        fm = np.empty((N_VARS, 2))
        for j in range(N_VARS):
            dq = np.zeros(N_VARS)
            dq[j] = eps * max(1.0, abs(q[j]))
            hsgn_flux_kernel(q + dq, g, c, fp)
            hsgn_flux_kernel(q - dq, g, c, fm)
            jac[:, j] = ((fp - fm) @ np.asarray(n)) / (2.0 * dq[j])
        h = q[0]
        u1, u2, p = q[1] / h, q[2] / h, q[4] / h
        bn = np.zeros((N_VARS, N_VARS))
        coef = g * h + gamma * p
        bn[1, 5] = n[0] * coef
        bn[2, 5] = n[1] * coef
        un = u1 * n[0] + u2 * n[1]
        bn[4, 0] = -c * c * un
        bn[4, 5] = -2.0 * c * c * un
        return jac + bn
