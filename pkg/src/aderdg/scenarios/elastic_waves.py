"""Initial conditions and reference solutions of the elasticity benchmarks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..models import Elastic2D, ElasticParams, elastic_plane_wave_eigenvectors


def pswave_init(points: np.ndarray, params: ElasticParams,
                alpha: float = 0.1, n=(1.0, 1.0)) -> np.ndarray:
    """Superposed p- and s-wave initial field Q = alpha (r_p + r_s) sin(2 pi n.x).

    Follows the benchmark definition literally with the unnormalized
    direction vector n = (1, 1) inside both the sine and the mode vectors.
    """
    n = np.asarray(n, dtype=float)
    r_p, r_s = elastic_plane_wave_eigenvectors(n, params)
    phase = np.sin(2.0 * np.pi * (points @ n))
    return alpha * phase[..., None] * (r_p + r_s)[None, :]


class PlaneWaveExact:
    """Exact evolution of sinusoidal plane-wave data varying along one line.

    Data of the form V sin(2 pi n.x) stays a function of s = n.x / |n| and
    evolves by the 1D system along that direction: V is decomposed onto the
    eigenvectors of B . n_unit and each mode translates with its eigenvalue.
    The benchmark's printed mode vectors (built with unnormalized n) are not
    exact eigenvectors, so the decomposition here is what actually propagates;
    at t_end = 3 sqrt(2) every mode has moved an integer number of periods
    and the field coincides with the initial datum again.
    """

    def __init__(self, params: ElasticParams, alpha: float = 0.1, n=(1.0, 1.0)):
        self.params = params
        self.n = np.asarray(n, dtype=float)
        self.norm = float(np.linalg.norm(self.n))
        nu = self.n / self.norm
        model = Elastic2D(params)
        zero = np.zeros(5)
        Bn = np.column_stack([model.bn_matvec(zero, e, nu) for e in np.eye(5)])
        lam, R = np.linalg.eig(Bn)
        if np.abs(lam.imag).max() > 1e-12:
            raise ValueError("directional system should have real eigenvalues")
        self.lam = lam.real
        self.R = R.real
        r_p, r_s = elastic_plane_wave_eigenvectors(self.n, params)
        self.coeffs = np.linalg.solve(self.R, alpha * (r_p + r_s))

    def __call__(self, points: np.ndarray, t: float) -> np.ndarray:
        out = np.zeros(points.shape[:-1] + (5,))
        s = (points @ self.n) / self.norm
        for c, lam, r in zip(self.coeffs, self.lam, self.R.T):
            phase = np.sin(2.0 * np.pi * self.norm * (s - lam * t))
            out += c * phase[..., None] * r[None, :]
        return out


def gaussian_pwave_init(points: np.ndarray, params: ElasticParams,
                        sigma_w: float = 0.01, x0=(-0.08, 0.0),
                        n=(1.0, 0.0)) -> np.ndarray:
    """Gaussian p-wave pulse Q = r_p exp(-(n.(x - x0))^2 / (2 sigma_w^2))."""
    if sigma_w <= 0:
        raise ValueError("sigma_w must be positive")
    n = np.asarray(n, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    r_p, _ = elastic_plane_wave_eigenvectors(n, params)
    arg = (points - x0) @ n
    prof = np.exp(-arg * arg / (2.0 * sigma_w * sigma_w))
    return prof[..., None] * r_p[None, :]


def gaussian_w_init(points: np.ndarray, radius: float = 500.0,
                    x0=(0.0, 0.0, 0.0), amplitude: float = -0.1) -> np.ndarray:
    """3D initial field: vertical velocity Gaussian, all else zero."""
    x0 = np.asarray(x0, dtype=float)
    r2 = np.sum((points - x0) ** 2, axis=-1)
    out = np.zeros(points.shape[:-1] + (9,))
    out[..., 8] = amplitude * np.exp(-r2 / (2.0 * radius * radius))
    return out


@dataclass(frozen=True)
class LambSource:
    """Point source of the Lamb benchmark acting on the vertical momentum."""

    location: tuple = (0.0, -1.0)
    a1: float = -2000.0
    f_c: float = 14.5
    t_delay: float = 0.08
    rho_s: float = 2200.0

    @property
    def a2(self) -> float:
        return -((math.pi * self.f_c) ** 2)


def lamb_time_factor(t: float, src: LambSource) -> float:
    """rho_s a1 (1/2 + a2 (t - tD)^2) exp(a2 (t - tD)^2)."""
    dt = t - src.t_delay
    return src.rho_s * src.a1 * (0.5 + src.a2 * dt * dt) * math.exp(src.a2 * dt * dt)
