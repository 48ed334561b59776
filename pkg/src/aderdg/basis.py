"""Gauss-Legendre nodal machinery on the reference interval [0, 1].

All DG elements use the tensor product of one Basis1D per axis (plus one in
time for the space-time predictor).  Nodes are the (N+1)-point Gauss-Legendre
points, so the discrete mass matrix is diagonal with the quadrature weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedOrder

MAX_QUAD_POINTS = 16


def gauss_legendre(npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the npts-point Gauss-Legendre rule on [0, 1].

    The rule is symmetric about 0.5 and integrates polynomials up to degree
    2*npts - 1 exactly.
    """
    if not 1 <= npts <= MAX_QUAD_POINTS:
        raise UnsupportedOrder(f"need 1 <= npts <= {MAX_QUAD_POINTS}, got {npts}")
    x, w = np.polynomial.legendre.leggauss(npts)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    # symmetrize: leggauss is symmetric to round-off, enforce it exactly
    nodes = 0.5 * (nodes + (1.0 - nodes[::-1]))
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


def lagrange_eval_matrix(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Matrix L with L[i, j] = ell_j(points[i]) for the Lagrange basis on nodes."""
    nodes = np.asarray(nodes, dtype=float)
    points = np.atleast_1d(np.asarray(points, dtype=float))
    n = nodes.size
    out = np.empty((points.size, n))
    for j in range(n):
        others = np.delete(nodes, j)
        num = np.prod(points[:, None] - others[None, :], axis=1)
        den = np.prod(nodes[j] - others)
        out[:, j] = num / den
    return out


def lagrange_diff_matrix(nodes: np.ndarray) -> np.ndarray:
    """Matrix D with D[i, j] = ell_j'(nodes[i])."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    # barycentric weights
    bw = np.empty(n)
    for j in range(n):
        bw[j] = 1.0 / np.prod(nodes[j] - np.delete(nodes, j))
    D = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (bw[j] / bw[i]) / (nodes[i] - nodes[j])
    for i in range(n):
        D[i, i] = -np.sum(np.delete(D[i], i))
    return D


@dataclass(frozen=True)
class Basis1D:
    """Nodal Lagrange basis of degree N on the (N+1) Gauss-Legendre nodes.

    Attributes
    ----------
    degree : polynomial degree N
    nodes, weights : (N+1)-point Gauss-Legendre rule on [0, 1]
    diff_matrix : D[i, j] = ell_j'(nodes[i]) in reference units
    edge_left, edge_right : ell_j(0) and ell_j(1)
    """

    degree: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    diff_matrix: np.ndarray = field(repr=False)
    edge_left: np.ndarray = field(repr=False)
    edge_right: np.ndarray = field(repr=False)

    @classmethod
    def make(cls, degree: int) -> "Basis1D":
        if degree < 0:
            raise UnsupportedOrder(f"degree must be >= 0, got {degree}")
        nodes, weights = gauss_legendre(degree + 1)
        D = lagrange_diff_matrix(nodes)
        eL = lagrange_eval_matrix(nodes, np.array([0.0]))[0]
        eR = lagrange_eval_matrix(nodes, np.array([1.0]))[0]
        b = cls(degree, nodes, weights, D, eL, eR)
        for arr in (b.nodes, b.weights, b.diff_matrix, b.edge_left, b.edge_right):
            arr.setflags(write=False)
        return b

    @property
    def npts(self) -> int:
        return self.degree + 1

    def eval_at(self, points: np.ndarray) -> np.ndarray:
        """ell_j evaluated at reference points, shape (len(points), N+1)."""
        return lagrange_eval_matrix(self.nodes, points)


def predictor_time_matrix(basis: Basis1D) -> tuple[np.ndarray, np.ndarray]:
    """Time-direction predictor matrix T and its inverse.

    T[a, b] = ell_a(1) ell_b(1) - w_b D[b, a] arises from integrating the
    time derivative by parts in the element-local space-time weak form; the
    Picard update solves T qhat = ell(0) u - dt * w * rhs along the time axis.
    """
    e1 = basis.edge_right
    w = basis.weights
    D = basis.diff_matrix
    T = np.outer(e1, e1) - w[None, :] * D.T
    return T, np.linalg.inv(T)
