"""Bathymetries and wave-train initialization of the water-wave benchmarks."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erf

from ..errors import ComplexEigenvalue
from ..models.hsgn import HsgnParams


def step_bathymetry(x) -> np.ndarray:
    """Smoothed step of height 0.1 at x = 0: z_b = 0.05 (erf(8 x) + 1)."""
    return 0.05 * (erf(8.0 * np.asarray(x, dtype=float)) + 1.0)


def dispersion_lambda(k: float, params: HsgnParams) -> float:
    """Real eigenvalue of the linearized system selected for wave trains.

    Closed form of the fast dispersive branch at the lake-at-rest base state;
    raises ComplexEigenvalue when a radicand turns negative.
    """
    g, gamma, c0, h0 = params.g, params.gamma, params.c, params.h0
    inner = (g * g * h0**6 * k**4
             + 2.0 * g * c0**2 * h0**5 * k**4
             - 4.0 * g * c0**2 * h0**3 * gamma * k**2
             + c0**4 * h0**4 * k**4
             + 4.0 * c0**4 * h0**2 * gamma * k**2
             + 4.0 * c0**4 * gamma**2)
    if inner < 0:
        raise ComplexEigenvalue("inner radicand negative")
    outer = (2.0 * c0**2 * gamma + g * h0**3 * k**2 + c0**2 * h0**2 * k**2
             + math.sqrt(inner))
    if outer < 0:
        raise ComplexEigenvalue("outer radicand negative")
    return math.sqrt(outer) / (math.sqrt(2.0) * h0)


def linearized_matrix(k: float, params: HsgnParams) -> np.ndarray:
    """k A0 + i E0 of the 1D linearization at rest; eigenvalues are omega.

    Plane waves Q' = Qhat exp(i(kx - omega t)) of the linearized system
    d_t Q' + A0 d_x Q' = E0 Q' satisfy (k A0 + i E0) Qhat = omega Qhat.
    """
    g, gamma, c0, h0 = params.g, params.gamma, params.c, params.h0
    A0 = np.zeros((5, 5))
    A0[0, 1] = 1.0
    A0[1, 0] = g * h0
    A0[1, 4] = 1.0
    A0[4, 1] = c0 * c0
    E0 = np.zeros((5, 5))
    E0[3, 4] = gamma / h0
    E0[4, 3] = -2.0 * c0 * c0 / h0
    return k * A0 + 1j * E0


def sinusoidal_mode_vector(k: float, params: HsgnParams):
    """Coefficients of the real mode shape used by sinusoidal_init.

    Returns (in_phase, quadrature): rows 0, 1, 4 of the printed mode vector
    multiply cos(kx) (in phase with the depth fluctuation); row 3 carries the
    tan(lambda t - k x) factor, whose product with the cosine modulation is
    evaluated in closed form as a sin(kx) quadrature component at t = 0, so
    no pole is ever touched.
    """
    lam = dispersion_lambda(k, params)
    g, gamma, c0, h0 = params.g, params.gamma, params.c, params.h0
    C = c0 * c0 * k * k + g * h0 * k * k - lam * lam
    in_phase = np.array([
        1.0,
        lam / k,
        0.0,
        0.0,
        -h0 * h0 * lam * lam * C / (2.0 * gamma * c0 * c0 * k * k),
    ])
    quadrature = np.array([
        0.0,
        0.0,
        0.0,
        h0 * lam * C / (2.0 * c0 * c0 * k * k),
        0.0,
    ])
    return in_phase, quadrature, lam


def sinusoidal_init(points: np.ndarray, params: HsgnParams,
                    wave_length: float = 200.0,
                    amplitude: float = 1e-3) -> np.ndarray:
    """Lake at rest plus the dispersion-relation wave train at t = 0.

    Q = Q0 + f(x) r_l with f = amplitude cos(2 pi x / s); the hw row of r_l
    carries tan(lambda t - k x), and f(x) tan(-k x) = -amplitude sin(k x)
    exactly, which is the closed form used here.
    """
    k = 2.0 * math.pi / wave_length
    in_phase, quad, _ = sinusoidal_mode_vector(k, params)
    x = points[..., 0]
    cosf = amplitude * np.cos(k * x)
    sinf = amplitude * np.sin(k * x)
    out = np.zeros(points.shape[:-1] + (6,))
    out[..., 0] = params.h0
    out[..., :5] += cosf[..., None] * in_phase[None, :]
    out[..., :5] += sinf[..., None] * quad[None, :]
    return out
