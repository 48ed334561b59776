"""Solitary-wave profile of the hyperbolic SGN/SM system.

The travelling pulse is the homoclinic orbit of the one-dimensional steady
traveling-frame system

    Q'(zeta) = (A(Q) - V I)^{-1} S(Q),      zeta = x - V t,

for the five-variable flat-bottom reduction Q = (h, hu1, hu2, hw, hp).
Starting from the rest state perturbed only in hp by eps = 1e-8, the orbit
leaves along the unstable manifold, reaches the crest and returns; the wave
speed V is found by bisection on the crest amplitude.  The analytical SGN
solution does not satisfy the relaxed system exactly, so this ODE profile is
the reference for initialization and error measurement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from ..errors import NonPositiveDepth, ShootingFailed, SingularTravelingFrame
from ..models.hsgn import HsgnParams

#: seed perturbation of hp at the rest state
EPS_SEED = 1e-8
#: bisection tolerance on the crest amplitude
AMP_TOL = 1e-8
#: number of tabulation samples across the pulse support
N_TAB = 40001


def traveling_frame_matrix(q: np.ndarray, params: HsgnParams) -> np.ndarray:
    """A(Q) = dF_x/dQ + B_x for the 1D five-variable flat-bottom reduction."""
    h, hu1, hu2, hw, hp = q
    if h <= params.h_floor:
        raise NonPositiveDepth(f"h = {h}")
    u = hu1 / h
    v = hu2 / h
    w = hw / h
    p = hp / h
    g, c = params.g, params.c
    A = np.zeros((5, 5))
    A[0, 1] = 1.0
    A[1, 0] = -u * u + g * h
    A[1, 1] = 2.0 * u
    A[1, 4] = 1.0
    A[2, 0] = -u * v
    A[2, 1] = v
    A[2, 2] = u
    A[3, 0] = -u * w
    A[3, 1] = w
    A[3, 3] = u
    A[4, 0] = -u * p - c * c * u
    A[4, 1] = p + c * c
    A[4, 4] = u
    return A


def source_1d(q: np.ndarray, params: HsgnParams) -> np.ndarray:
    """S(Q) of the five-variable reduction."""
    h = q[0]
    return np.array([0.0, 0.0, 0.0,
                     params.gamma * q[4] / h,
                     -2.0 * params.c ** 2 * q[3] / h])


def soliton_ode_rhs(q: np.ndarray, speed: float, params: HsgnParams,
                    cond_limit: float = 1e12) -> np.ndarray:
    """Q' = (A(Q) - V I)^{-1} S(Q) of the traveling frame."""
    q = np.asarray(q, dtype=float)
    M = traveling_frame_matrix(q, params) - speed * np.eye(5)
    if np.linalg.cond(M) > cond_limit:
        raise SingularTravelingFrame(
            f"A(Q) - V I nearly singular at V = {speed}")
    return np.linalg.solve(M, source_1d(q, params))


@dataclass
class SolitonProfile:
    """Tabulated homoclinic pulse, crest at zeta = 0."""

    zeta: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    speed: float = 0.0
    amplitude: float = 0.0
    params: HsgnParams = None
    eps: float = EPS_SEED
    _spline: CubicSpline = field(default=None, repr=False)

    def __post_init__(self):
        if self._spline is None:
            self._spline = CubicSpline(self.zeta, self.values, axis=0)

    @property
    def support(self):
        return float(self.zeta[0]), float(self.zeta[-1])

    def __call__(self, zeta) -> np.ndarray:
        """Five-variable states at the requested frame coordinates."""
        zeta = np.asarray(zeta, dtype=float)
        out = np.zeros(zeta.shape + (5,))
        out[..., 0] = self.params.h0
        inside = (zeta >= self.zeta[0]) & (zeta <= self.zeta[-1])
        if np.any(inside):
            out[inside] = self._spline(zeta[inside])
        return out

    def derivative(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=float)
        out = np.zeros(zeta.shape + (5,))
        inside = (zeta >= self.zeta[0]) & (zeta <= self.zeta[-1])
        if np.any(inside):
            out[inside] = self._spline(zeta[inside], 1)
        return out

    def state_2d(self, points: np.ndarray, t: float = 0.0,
                 center: float = 0.0, period: float = None) -> np.ndarray:
        """Six-variable HSGN states over 2D points for a pulse centred at
        ``center`` and travelling in +x; flat bottom z_b = 0."""
        x = points[..., 0]
        zeta = x - center - self.speed * t
        if period is not None:
            zeta = (zeta + period / 2.0) % period - period / 2.0
        prof = self(zeta)
        out = np.zeros(points.shape[:-1] + (6,))
        out[..., :5] = prof
        return out


def _rhs_for_ivp(params, speed):
    def rhs(_z, q):
        M = traveling_frame_matrix(q, params) - speed * np.eye(5)
        return np.linalg.solve(M, source_1d(q, params))
    return rhs


def _integrate(params, speed, span, eps):
    """Integrate from the perturbed rest seed; returns the solver result."""
    q0 = np.array([params.h0, 0.0, 0.0, 0.0, eps])

    def dh(z, q):
        # sign of dh/dzeta switches at the crest
        M = traveling_frame_matrix(q, params) - speed * np.eye(5)
        return np.linalg.solve(M, source_1d(q, params))[0]

    dh.direction = -1.0
    return solve_ivp(_rhs_for_ivp(params, speed), (0.0, span), q0,
                     method="DOP853", rtol=1e-12, atol=1e-13,
                     events=[dh], dense_output=True)


def _crest_amplitude(params, speed, span, eps):
    sol = _integrate(params, speed, span, eps)
    best = 0.0
    zc = None
    for z in sol.t_events[0]:
        h = sol.sol(z)[0]
        if h - params.h0 > best:
            best = h - params.h0
            zc = z
    if zc is None:
        # no crest found: treat the running maximum as the amplitude
        hmax = sol.y[0].max()
        return hmax - params.h0, None, sol
    return best, zc, sol


def build_soliton(a_target: float, params: HsgnParams,
                  eps: float = EPS_SEED, n_tab: int = N_TAB) -> SolitonProfile:
    """Shoot on the wave speed until the crest amplitude matches a_target.

    The bracket is [sqrt(g H0), sqrt(g (H0 + 2 a_target))]; the amplitude
    grows monotonically with V across it, so plain bisection applies.  The
    pulse is integrated until |h - H0| falls back below 10 eps, re-centred
    at the crest and tabulated for cubic interpolation.
    """
    if not 0 < a_target < params.h0:
        raise ShootingFailed(f"amplitude {a_target} outside (0, H0)")
    g, h0 = params.g, params.h0
    v_lo = np.sqrt(g * h0)
    v_hi = np.sqrt(g * (h0 + 2.0 * a_target))
    span = 4000.0 * h0
    a_hi, _, _ = _crest_amplitude(params, v_hi, span, eps)
    if a_hi < a_target:
        raise ShootingFailed(
            f"amplitude {a_hi:.3e} at the upper bracket {v_hi:.6f} "
            f"below target {a_target:.3e}")
    lo, hi = v_lo, v_hi
    speed = None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        a_mid, _, _ = _crest_amplitude(params, mid, span, eps)
        if abs(a_mid - a_target) <= AMP_TOL:
            speed = mid
            break
        if a_mid < a_target:
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= 1e-15 * v_hi:
            speed = 0.5 * (lo + hi)
            break
    if speed is None:
        raise ShootingFailed("bisection on the wave speed did not converge")

    # final orbit: through the crest until the pulse has decayed again
    def ret(z, q):
        return q[0] - (h0 + 10.0 * eps)

    ret.direction = -1.0
    ret.terminal = True

    def dh(z, q):
        M = traveling_frame_matrix(q, params) - speed * np.eye(5)
        return np.linalg.solve(M, source_1d(q, params))[0]

    dh.direction = -1.0
    q0 = np.array([h0, 0.0, 0.0, 0.0, eps])
    sol = solve_ivp(_rhs_for_ivp(params, speed), (0.0, span), q0,
                    method="DOP853", rtol=1e-12, atol=1e-13,
                    events=[dh, ret], dense_output=True)
    if sol.t_events[1].size == 0:
        raise ShootingFailed("pulse did not return to the rest state")
    crest_candidates = sol.t_events[0]
    if crest_candidates.size == 0:
        raise ShootingFailed("no crest located on the final orbit")
    heights = [sol.sol(z)[0] for z in crest_candidates]
    z_crest = crest_candidates[int(np.argmax(heights))]
    z_end = sol.t_events[1][0]
    amplitude = float(max(heights) - h0)
    zeta = np.linspace(0.0, z_end, n_tab)
    values = sol.sol(zeta).T
    return SolitonProfile(zeta=zeta - z_crest, values=values, speed=float(speed),
                          amplitude=amplitude, params=params, eps=eps)
