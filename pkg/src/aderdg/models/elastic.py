"""Linear elasticity in first-order velocity-stress form.

The conservative flux is identically zero in this formulation: Hooke's law
and momentum balance both enter through the non-conservative matrix term
B(x) . grad Q, whose coefficients depend on the (possibly piecewise) material
but not on the state, so the system is linear.

Variable ordering:
    3D: (sxx, syy, szz, sxy, syz, sxz, u1, u2, u3)
    2D: (sxx, syy, sxy, u, v)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .base import HyperbolicModel


@dataclass(frozen=True)
class MaterialRegion:
    """Axis-aligned box overriding the background material inside it."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    lam: float
    mu: float
    rho: float

    def contains(self, x) -> bool:
        return all(l <= xi <= h for xi, l, h in zip(x, self.lo, self.hi))


@dataclass(frozen=True)
class ElasticParams:
    """Lame constants and density, optionally piecewise per region.

    Material lookup in the solver is by element barycenter, so regions are
    honoured exactly when the mesh resolves their boxes.
    """

    lam: float
    mu: float
    rho: float
    regions: tuple[MaterialRegion, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for lam, mu, rho in [(self.lam, self.mu, self.rho)] + [
            (r.lam, r.mu, r.rho) for r in self.regions
        ]:
            if rho <= 0:
                raise ValueError("density must be positive")
            if mu < 0 or lam + 2 * mu <= 0:
                raise ValueError("need mu >= 0 and lam + 2 mu > 0")

    @classmethod
    def from_speeds(cls, cp: float, cs: float, rho: float) -> "ElasticParams":
        mu = rho * cs * cs
        lam = rho * cp * cp - 2.0 * mu
        return cls(lam=lam, mu=mu, rho=rho)

    @property
    def cp(self) -> float:
        return math.sqrt((self.lam + 2.0 * self.mu) / self.rho)

    @property
    def cs(self) -> float:
        return math.sqrt(self.mu / self.rho)

    def material_at(self, x) -> tuple[float, float, float]:
        """(lam, mu, rho) at point x; later regions win."""
        lam, mu, rho = self.lam, self.mu, self.rho
        for r in self.regions:
            if r.contains(x):
                lam, mu, rho = r.lam, r.mu, r.rho
        return lam, mu, rho


@njit(cache=True)
def elastic2d_ncp_kernel(gx, gy, lam, mu, rho, out):
    """B . grad Q for the 2D system; B depends only on the material."""
    lp2m = lam + 2.0 * mu
    ir = 1.0 / rho
    out[0] = -(lp2m * gx[3] + lam * gy[4])
    out[1] = -(lam * gx[3] + lp2m * gy[4])
    out[2] = -mu * (gx[4] + gy[3])
    out[3] = -ir * (gx[0] + gy[2])
    out[4] = -ir * (gx[2] + gy[1])


@njit(cache=True)
def elastic3d_ncp_kernel(gx, gy, gz, lam, mu, rho, out):
    """B . grad Q for the 3D system."""
    lp2m = lam + 2.0 * mu
    ir = 1.0 / rho
    out[0] = -(lp2m * gx[6] + lam * gy[7] + lam * gz[8])
    out[1] = -(lam * gx[6] + lp2m * gy[7] + lam * gz[8])
    out[2] = -(lam * gx[6] + lam * gy[7] + lp2m * gz[8])
    out[3] = -mu * (gx[7] + gy[6])
    out[4] = -mu * (gy[8] + gz[7])
    out[5] = -mu * (gx[8] + gz[6])
    out[6] = -ir * (gx[0] + gy[3] + gz[5])
    out[7] = -ir * (gx[3] + gy[1] + gz[4])
    out[8] = -ir * (gx[5] + gy[4] + gz[2])


@njit(cache=True)
def elastic2d_bn_matvec_kernel(dq, nx, ny, lam, mu, rho, out):
    """(B . n) dq in 2D."""
    lp2m = lam + 2.0 * mu
    ir = 1.0 / rho
    out[0] = -(lp2m * nx * dq[3] + lam * ny * dq[4])
    out[1] = -(lam * nx * dq[3] + lp2m * ny * dq[4])
    out[2] = -mu * (nx * dq[4] + ny * dq[3])
    out[3] = -ir * (nx * dq[0] + ny * dq[2])
    out[4] = -ir * (nx * dq[2] + ny * dq[1])


@njit(cache=True)
def elastic3d_bn_matvec_kernel(dq, nx, ny, nz, lam, mu, rho, out):
    """(B . n) dq in 3D."""
    lp2m = lam + 2.0 * mu
    ir = 1.0 / rho
    out[0] = -(lp2m * nx * dq[6] + lam * ny * dq[7] + lam * nz * dq[8])
    out[1] = -(lam * nx * dq[6] + lp2m * ny * dq[7] + lam * nz * dq[8])
    out[2] = -(lam * nx * dq[6] + lam * ny * dq[7] + lp2m * nz * dq[8])
    out[3] = -mu * (nx * dq[7] + ny * dq[6])
    out[4] = -mu * (ny * dq[8] + nz * dq[7])
    out[5] = -mu * (nx * dq[8] + nz * dq[6])
    out[6] = -ir * (nx * dq[0] + ny * dq[3] + nz * dq[5])
    out[7] = -ir * (nx * dq[3] + ny * dq[1] + nz * dq[4])
    out[8] = -ir * (nx * dq[5] + ny * dq[4] + nz * dq[2])


class _ElasticBase(HyperbolicModel):
    is_linear = True

    def __init__(self, params: ElasticParams):
        self.params = params

    def flux(self, q):
        q = self.validate_state(q)
        return np.zeros((self.n_vars, self.dim))

    def source(self, q):
        self.validate_state(q)
        return np.zeros(self.n_vars)

    def max_signal_speed(self, q, n, x=None):
        self.validate_state(q)
        if x is None:
            return self.params.cp
        lam, mu, rho = self.params.material_at(x)
        return math.sqrt((lam + 2.0 * mu) / rho)


class Elastic2D(_ElasticBase):
    n_vars = 5
    dim = 2
    var_names = ("sxx", "syy", "sxy", "u", "v")

    def ncp(self, q, grads, x=None):
        self.validate_state(q)
        grads = np.asarray(grads, dtype=float)
        lam, mu, rho = self._mat(x)
        out = np.empty(5)
        elastic2d_ncp_kernel(grads[0], grads[1], lam, mu, rho, out)
        return out

    def bn_matvec(self, q, dq, n, x=None):
        self.validate_state(q)
        lam, mu, rho = self._mat(x)
        out = np.empty(5)
        elastic2d_bn_matvec_kernel(np.asarray(dq, dtype=float), n[0], n[1],
                                   lam, mu, rho, out)
        return out

    def _mat(self, x):
        if x is None:
            return self.params.lam, self.params.mu, self.params.rho
        return self.params.material_at(x)


class Elastic3D(_ElasticBase):
    n_vars = 9
    dim = 3
    var_names = ("sxx", "syy", "szz", "sxy", "syz", "sxz", "u", "v", "w")

    def ncp(self, q, grads, x=None):
        self.validate_state(q)
        grads = np.asarray(grads, dtype=float)
        lam, mu, rho = self._mat(x)
        out = np.empty(9)
        elastic3d_ncp_kernel(grads[0], grads[1], grads[2], lam, mu, rho, out)
        return out

    def bn_matvec(self, q, dq, n, x=None):
        self.validate_state(q)
        lam, mu, rho = self._mat(x)
        out = np.empty(9)
        elastic3d_bn_matvec_kernel(np.asarray(dq, dtype=float), n[0], n[1], n[2],
                                   lam, mu, rho, out)
        return out

    def _mat(self, x):
        if x is None:
            return self.params.lam, self.params.mu, self.params.rho
        return self.params.material_at(x)


def elastic_plane_wave_eigenvectors(n, params: ElasticParams):
    """Mode vectors of the 2D p- and s-waves along direction n.

    Follows the component formulas literally with n as given (the classic
    convergence benchmark feeds the unnormalized diagonal (1, 1)):

        r_p = (lam + 2 mu nx^2, lam + 2 mu ny^2, 2 mu nx ny, -cp nx, -cp ny)
        r_s = (-2 mu nx ny, 2 mu nx ny, mu (nx^2 - ny^2), cs ny, -cs nx)
    """
    nx, ny = float(n[0]), float(n[1])
    lam, mu = params.lam, params.mu
    cp, cs = params.cp, params.cs
    r_p = np.array([
        lam + 2.0 * mu * nx * nx,
        lam + 2.0 * mu * ny * ny,
        2.0 * mu * nx * ny,
        -cp * nx,
        -cp * ny,
    ])
    r_s = np.array([
        -2.0 * mu * nx * ny,
        2.0 * mu * nx * ny,
        mu * (nx * nx - ny * ny),
        cs * ny,
        -cs * nx,
    ])
    return r_p, r_s
