"""Element-level entry points of the ADER-DG building blocks.

The batched kernels in kernels_* do the heavy lifting inside DomainSolver;
the functions here expose the same operations for a single element or a
single face quadrature point, which is what verification tests and scripted
experiments want.
"""

from __future__ import annotations

import numpy as np

from . import kernels_elastic as ke
from . import kernels_hsgn as kh
from .basis import Basis1D, gauss_legendre, predictor_time_matrix
from .errors import NonPositiveDepth, PathThroughInvalidState, PicardDiverged
from .models import Hsgn
from .models.base import HyperbolicModel
from .solver import N_PATH, TOL_PICARD


def cfl_dt(cfl: float, h_min: float, degree: int, lam_max: float) -> float:
    """dt = cfl * h_min / ((2N+1) |lambda_max|)."""
    return cfl * h_min / ((2 * degree + 1) * lam_max)


def picard_sweeps(element: np.ndarray, dt: float, spacings, model,
                  n_sweeps: int) -> np.ndarray:
    """Predictor state after exactly ``n_sweeps`` Picard iterations.

    element has shape (n, .., n, n_vars) on the tensor Gauss nodes.  Used by
    convergence-of-iteration studies; production stepping uses predict().
    """
    basis = Basis1D.make(element.shape[0] - 1)
    _, Tinv = predictor_time_matrix(basis)
    u = element[None]
    q = np.zeros((1, *element.shape[:-1], basis.npts, element.shape[-1]))
    if isinstance(model, Hsgn):
        p = model.params
        fxi = np.zeros_like(u)
        fyi = np.zeros_like(u)
        nsi = np.zeros_like(u)
        smax = np.zeros(1)
        flags = kh.predict(u.copy(), q, fxi, fyi, nsi, smax, dt, *spacings,
                           basis.weights, basis.diff_matrix, Tinv,
                           basis.edge_left, p.g, p.gamma, p.c, p.h_floor,
                           n_sweeps, 0.0, 0)
        if (flags == kh.FLAG_DRY).any():
            raise NonPositiveDepth("dry state inside the predictor")
        return q[0]
    lam = np.array([model.params.lam])
    mu = np.array([model.params.mu])
    rho = np.array([model.params.rho])
    ri = np.zeros_like(u)
    if model.dim == 2:
        ke.predict_2d(u.copy(), q, ri, dt, *spacings, basis.weights,
                      basis.diff_matrix, Tinv, basis.edge_left,
                      lam, mu, rho, n_sweeps)
    else:
        ke.predict_3d(u.copy(), q, ri, dt, *spacings, basis.weights,
                      basis.diff_matrix, Tinv, basis.edge_left,
                      lam, mu, rho, n_sweeps)
    return q[0]


def predict(element: np.ndarray, dt: float, spacings, model) -> np.ndarray:
    """Space-time predictor of one element.

    Linear models run the theoretical N+1 sweeps; nonlinear models iterate to
    the 1e-12 relative tolerance with at most 2(N+1) sweeps and raise
    PicardDiverged beyond that.
    """
    degree = element.shape[0] - 1
    if isinstance(model, Hsgn):
        basis = Basis1D.make(degree)
        _, Tinv = predictor_time_matrix(basis)
        p = model.params
        u = element[None].copy()
        q = np.zeros((1, *element.shape[:-1], basis.npts, element.shape[-1]))
        fxi = np.zeros_like(u)
        fyi = np.zeros_like(u)
        nsi = np.zeros_like(u)
        smax = np.zeros(1)
        flags = kh.predict(u, q, fxi, fyi, nsi, smax, dt, *spacings,
                           basis.weights, basis.diff_matrix, Tinv,
                           basis.edge_left, p.g, p.gamma, p.c, p.h_floor,
                           2 * (degree + 1) + 6, TOL_PICARD, 0)
        if (flags == kh.FLAG_DRY).any():
            raise NonPositiveDepth("dry state inside the predictor")
        if (flags == kh.FLAG_NOCONV).any():
            raise PicardDiverged("predictor iteration did not reach tolerance")
        return q[0]
    return picard_sweeps(element, dt, spacings, model, degree + 2)


def picard_residual(element: np.ndarray, dt: float, spacings, model,
                    n_sweeps: int) -> float:
    """Relative fixed-point residual after ``n_sweeps`` Picard iterations.

    One further sweep is applied and the max-norm change is reported,
    normalized by the iterate magnitude.
    """
    q1 = picard_sweeps(element, dt, spacings, model, n_sweeps)
    q2 = picard_sweeps(element, dt, spacings, model, n_sweeps + 1)
    return float(np.abs(q2 - q1).max() / max(np.abs(q1).max(), 1e-300))


def rusanov(q_left: np.ndarray, q_right: np.ndarray, n: np.ndarray,
            model: HyperbolicModel) -> np.ndarray:
    """Rusanov flux 0.5 (F(qR) + F(qL)) . n - 0.5 s_max (qR - qL)."""
    q_left = np.asarray(q_left, dtype=float)
    q_right = np.asarray(q_right, dtype=float)
    n = np.asarray(n, dtype=float)
    s = max(model.max_signal_speed(q_left, n), model.max_signal_speed(q_right, n))
    fl = model.flux(q_left) @ n
    fr = model.flux(q_right) @ n
    return 0.5 * (fl + fr) - 0.5 * s * (q_right - q_left)


def path_jump(q_left: np.ndarray, q_right: np.ndarray, n: np.ndarray,
              model: HyperbolicModel, n_path: int = N_PATH) -> np.ndarray:
    """Path-conservative jump 0.5 (int_0^1 B(psi(s)) . n ds)(qR - qL).

    The segment path psi(s) = qL + s (qR - qL) is integrated with an
    n_path-point Gauss rule; for state-independent B (elasticity) the result
    is exact for any rule.
    """
    q_left = np.asarray(q_left, dtype=float)
    q_right = np.asarray(q_right, dtype=float)
    dq = q_right - q_left
    if model.is_linear:
        return 0.5 * model.bn_matvec(q_left, dq, n)
    nodes, weights = gauss_legendre(n_path)
    out = np.zeros(model.n_vars)
    for s, w in zip(nodes, weights):
        psi = q_left + s * dq
        if isinstance(model, Hsgn) and psi[0] <= model.params.h_floor:
            raise PathThroughInvalidState(
                f"segment path reaches h = {psi[0]} at s = {s}")
        out += w * model.bn_matvec(psi, dq, n)
    return 0.5 * out
