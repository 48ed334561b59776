"""Per-domain ADER-DG driver: dof storage, stepping, measurement.

DomainSolver owns the nodal dofs of one Cartesian domain and advances them
with the element-local space-time predictor followed by the one-step
corrector.  The predictor runs in parallel across elements with no shared
mutable state; face passes read two predictors read-only; the assembly pass
writes only the owning element, so results are independent of the worker
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels_elastic as ke
from . import kernels_hsgn as kh
from .basis import Basis1D, gauss_legendre, predictor_time_matrix
from .errors import (
    NonPositiveDepth,
    PathThroughInvalidState,
    PicardDiverged,
    ZeroSignalSpeed,
)
from .mesh import COUPLED, DIRICHLET, FREE_SURFACE, CartesianMesh, free_surface_signs
from .models import Hsgn
from .models.base import HyperbolicModel

#: segment-path quadrature points (exact for path integrands up to degree 5)
N_PATH = 3
#: predictor tolerance, relative max-norm of the dof change
TOL_PICARD = 1e-12


@dataclass
class PointSource:
    """Dirac point source screened against the nodal basis.

    ``time_fn(t)`` is the forcing density of the target equation row; the
    screening weights already include the inverse mass matrix and the split
    between the elements sharing the location when it sits on a face.
    """

    elements: list
    screens: list
    var: int
    time_fn: Callable[[float], float]


class _Patch:
    """Ghost data of one non-periodic boundary patch."""

    def __init__(self, kind, sign, offset, points=None, state_fn=None,
                 absb=None):
        self.kind = kind
        self.sign = sign
        self.offset = offset
        self.points = points
        self.state_fn = state_fn
        # exact |B.n| of the interior element at each boundary cell; when
        # present the face uses the Godunov upwind penalty, which keeps the
        # reflective boundaries of the linear system non-amplifying
        self.absb = absb


class DomainSolver:
    def __init__(self, mesh: CartesianMesh, model: HyperbolicModel, degree: int,
                 n_path: int = N_PATH):
        if model.dim != mesh.dim:
            raise ValueError("model and mesh dimensions differ")
        self.mesh = mesh
        self.model = model
        self.degree = degree
        self.basis = Basis1D.make(degree)
        _, self.Tinv = predictor_time_matrix(self.basis)
        self.n = degree + 1
        self.nv = model.n_vars
        d = mesh.dim
        self.spath, self.wpath = gauss_legendre(n_path)
        n, nv, counts = self.n, self.nv, mesh.counts
        E = mesh.n_elements
        # tolerance exit governs accuracy; the cap only guards divergence.
        # CFL-sized steps at low N need a few sweeps beyond 2(N+1) to push
        # the nonlinear tail under 1e-12, hence the slack.
        self.max_picard = 2 * (degree + 1) + 6
        self.last_picard_iters = 0
        self.u = np.zeros((E, *([n] * d), nv))
        self.point_sources: list[PointSource] = []
        self._is_hsgn = isinstance(model, Hsgn)
        if self._is_hsgn:
            # the fluid keeps its full space-time predictor: the coupling
            # samples it at arbitrary interface points and times
            self.q = np.zeros((E, *([n] * (d + 1)), nv))
        else:
            # linear solvers only ever need face traces plus the volume feed
            self.tr = [
                (np.zeros((E, *([n] * (d - 1)), n, nv)),
                 np.zeros((E, *([n] * (d - 1)), n, nv)))
                for _ in range(d)]
        if self._is_hsgn:
            self.fxi = np.zeros((E, n, n, nv))
            self.fyi = np.zeros((E, n, n, nv))
            self.nsi = np.zeros((E, n, n, nv))
            self._smax_scratch = np.zeros(E)
        else:
            self.ri = np.zeros((E, *([n] * d), nv))
            bc = mesh.barycenters()
            mats = np.array([model.params.material_at(x) for x in bc])
            self.lam_e = np.ascontiguousarray(mats[:, 0])
            self.mu_e = np.ascontiguousarray(mats[:, 1])
            self.rho_e = np.ascontiguousarray(mats[:, 2])
            self.cp_e = np.sqrt((self.lam_e + 2 * self.mu_e) / self.rho_e)
            # series coefficients of the exact N+1 Picard iterate:
            # K[m] = (-TW)^m 1 over time nodes, kap[m] its time integral
            TW = self.Tinv * self.basis.weights[None, :]
            K = np.empty((self.n + 1, self.n))
            K[0] = 1.0
            for m in range(1, self.n + 1):
                K[m] = -(TW @ K[m - 1])
            self._K = K
            self._kap = K @ self.basis.weights
        self._alloc_faces()
        self._build_patches()

    # -- setup ----------------------------------------------------------

    def _alloc_faces(self):
        n, nv, d = self.n, self.nv, self.mesh.dim
        counts = self.mesh.counts
        self._G = []
        self._Dm = []
        self._Dp = []
        for ax in range(d):
            nf = counts[ax] if self.mesh.is_periodic(ax) else counts[ax] + 1
            others = tuple(counts[a] for a in range(d) if a != ax)
            shape = (nf, *others, *([n] * (d - 1)), nv)
            self._G.append(np.zeros(shape))
            self._Dm.append(np.zeros(shape))
            self._Dp.append(np.zeros(shape))

    def _patch_shape(self, axis):
        n, nv, d = self.n, self.nv, self.mesh.dim
        others = tuple(self.mesh.counts[a] for a in range(d) if a != axis)
        return (*others, *([n] * (d - 1)), n, nv)

    def _patch_points(self, axis, side):
        """Physical coordinates of the face quadrature nodes of a patch."""
        mesh, n, d = self.mesh, self.n, self.mesh.dim
        axes = mesh.node_axes(self.basis.nodes)
        others = [a for a in range(d) if a != axis]
        coords = []
        for a in others:
            coords.append(axes[a])  # (count_a, n)
        face_x = mesh.lo[axis] if side == 0 else mesh.hi[axis]
        if d == 2:
            (ca,) = coords
            pts = np.zeros((*ca.shape, 2))
            pts[..., others[0]] = ca
            pts[..., axis] = face_x
            return pts  # (nother, n, 2)
        c1, c2 = coords
        no1, no2 = c1.shape[0], c2.shape[0]
        pts = np.zeros((no1, no2, n, n, 3))
        pts[..., others[0]] = c1[:, None, :, None]
        pts[..., others[1]] = c2[None, :, None, :]
        pts[..., axis] = face_x
        return pts

    def _build_patches(self):
        self.patches = {}
        d, nv = self.mesh.dim, self.nv
        for ax in range(d):
            if self.mesh.is_periodic(ax):
                continue
            for side in (0, 1):
                spec = self.mesh.boundary(ax, side)
                offset = np.zeros(self._patch_shape(ax))
                if spec.kind == DIRICHLET:
                    sign = np.zeros(nv)
                    pts = self._patch_points(ax, side)
                    patch = _Patch(spec.kind, sign, offset, points=pts,
                                   state_fn=spec.state)
                elif spec.kind in (FREE_SURFACE, COUPLED):
                    sign = free_surface_signs(nv, ax)
                    absb = None
                    if not self._is_hsgn:
                        absb = self._boundary_absb(ax, side)
                    patch = _Patch(spec.kind, sign, offset, absb=absb)
                else:
                    raise ValueError(f"unsupported boundary kind {spec.kind}")
                self.patches[(ax, side)] = patch

    def _boundary_absb(self, axis, side):
        """|B . n| of every boundary element of the patch, by eigensplit."""
        mesh = self.mesh
        d, nv = mesh.dim, self.nv
        others = [a for a in range(d) if a != axis]
        shape = tuple(mesh.counts[a] for a in others)
        absb = np.zeros((*shape, nv, nv))
        unit = np.eye(d)[axis]
        zero = np.zeros(nv)
        bidx = mesh.counts[axis] - 1 if side == 1 else 0
        for pos in np.ndindex(shape):
            idx = [0] * d
            idx[axis] = bidx
            for a, p in zip(others, pos):
                idx[a] = p
            x = mesh.barycenter(idx)
            Bn = np.column_stack(
                [self.model.bn_matvec(zero, e, unit, x=x) for e in np.eye(nv)])
            ev, R = np.linalg.eig(Bn)
            absb[pos] = np.real(R @ np.diag(np.abs(ev)) @ np.linalg.inv(R))
        return absb

    def set_initial(self, fn):
        """Project (interpolate at the tensor Gauss nodes) an initial state."""
        pts = self.mesh.node_grid(self.basis.nodes)
        self.u[...] = fn(pts)

    def add_point_source(self, location, var: int, time_fn):
        """Register a Dirac source at ``location`` acting on equation ``var``.

        A location on a shared face contributes to every containing element
        with equal weight, preserving mesh symmetries.
        """
        mesh = self.mesh
        cand = []
        for a in range(mesh.dim):
            s = (location[a] - mesh.lo[a]) / mesh.spacings[a]
            near = round(s)
            if abs(s - near) < 1e-9 and 0 < near < mesh.counts[a]:
                ids = [near - 1, near]  # on a face: split symmetrically
            else:
                i = int(math.floor(s))
                ids = [min(max(i, 0), mesh.counts[a] - 1)]
            cand.append(ids)
        combos = [[]]
        for ids in cand:
            combos = [c + [i] for c in combos for i in ids]
        elements, screens = [], []
        w = self.basis.weights
        vol = float(np.prod(mesh.spacings))
        for idx in combos:
            ref = [(location[a] - mesh.lo[a]) / mesh.spacings[a] - idx[a]
                   for a in range(mesh.dim)]
            phis = [self.basis.eval_at(np.array([r]))[0] for r in ref]
            if mesh.dim == 2:
                screen = np.einsum("i,j->ij", phis[0], phis[1])
                mass = np.einsum("i,j->ij", w, w) * vol
            else:
                screen = np.einsum("i,j,k->ijk", phis[0], phis[1], phis[2])
                mass = np.einsum("i,j,k->ijk", w, w, w) * vol
            elements.append(mesh.element_id(idx))
            screens.append(screen / mass / len(combos))
        self.point_sources.append(PointSource(elements, screens, var, time_fn))

    # -- stepping -------------------------------------------------------

    def max_signal_speed_global(self) -> float:
        if self._is_hsgn:
            p = self.model.params
            flags = kh.smax_nodes(self.u, p.g, p.c, p.h_floor, self._smax_scratch)
            if flags.any():
                raise NonPositiveDepth("dry state while evaluating signal speeds")
            return float(self._smax_scratch.max())
        return float(self.cp_e.max())

    def compute_dt(self, cfl: float, dt_fallback: Optional[float] = None) -> float:
        """CFL step dt = cfl h_min / ((2N+1) |lambda_max|)."""
        d = self.mesh.dim
        if not 0 < cfl < 1.0 / d:
            raise ValueError(f"need 0 < cfl < 1/{d}")
        lam_max = self.max_signal_speed_global()
        if lam_max <= 0.0:
            if dt_fallback is not None:
                return dt_fallback
            raise ZeroSignalSpeed("no waves: supply dt_fallback")
        hmin = min(self.mesh.spacings)
        return cfl * hmin / ((2 * self.degree + 1) * lam_max)

    def predict_phase(self, dt: float):
        b = self.basis
        if self._is_hsgn:
            p = self.model.params
            flags = kh.predict(
                self.u, self.q, self.fxi, self.fyi, self.nsi, self._smax_scratch,
                dt, *self.mesh.spacings, b.weights, b.diff_matrix, self.Tinv,
                b.edge_left, p.g, p.gamma, p.c, p.h_floor,
                self.max_picard, TOL_PICARD, 0)
            if (flags == kh.FLAG_DRY).any():
                raise NonPositiveDepth("dry state inside the predictor")
            if (flags == kh.FLAG_NOCONV).any():
                raise PicardDiverged(
                    f"predictor not converged in {self.max_picard} iterations")
            self.last_picard_iters = int(flags.max())
        elif self.mesh.dim == 2:
            ke.predict_lin_tr_2d(self.u, self.ri,
                                 self.tr[0][0], self.tr[0][1],
                                 self.tr[1][0], self.tr[1][1],
                                 dt, *self.mesh.spacings, b.diff_matrix,
                                 self._K, self._kap, b.edge_left, b.edge_right,
                                 self.lam_e, self.mu_e, self.rho_e)
        else:
            ke.predict_lin_tr_3d(self.u, self.ri,
                                 self.tr[0][0], self.tr[0][1],
                                 self.tr[1][0], self.tr[1][1],
                                 self.tr[2][0], self.tr[2][1],
                                 dt, *self.mesh.spacings, b.diff_matrix,
                                 self._K, self._kap, b.edge_left, b.edge_right,
                                 self.lam_e, self.mu_e, self.rho_e)

    def resolve_boundaries(self, t: float, dt: float):
        """Fill Dirichlet ghost offsets for the step window [t, t + dt]."""
        for patch in self.patches.values():
            if patch.kind != DIRICHLET:
                continue
            taus = self.basis.nodes
            for a, tau in enumerate(taus):
                states = patch.state_fn(patch.points, t + tau * dt)
                patch.offset[..., a, :] = states

    def _dummy_patch(self):
        d = self.mesh.dim
        sign = np.zeros(self.nv)
        off = np.zeros((1,) * (2 * (d - 1) + 1) + (self.nv,))
        absb = np.zeros((1,) * (d - 1) + (self.nv, self.nv))
        return sign, off, absb

    def correct_phase(self, t: float, dt: float):
        b = self.basis
        mesh = self.mesh
        d = mesh.dim
        counts = mesh.counts
        sgn_d, off_d, absb_d = self._dummy_patch()
        gs, go, gu, gb = {}, {}, {}, {}
        for ax in range(d):
            for side in (0, 1):
                p = self.patches.get((ax, side))
                if p is None:
                    gs[(ax, side)], go[(ax, side)] = sgn_d, off_d
                    gu[(ax, side)], gb[(ax, side)] = False, absb_d
                else:
                    gs[(ax, side)], go[(ax, side)] = p.sign, p.offset
                    gu[(ax, side)] = p.absb is not None
                    gb[(ax, side)] = p.absb if p.absb is not None else absb_d
        if self._is_hsgn:
            prm = self.model.params
            for ax in range(2):
                flags = kh.face_pass(
                    self.q, ax, mesh.is_periodic(ax), counts[0], counts[1],
                    gs[(ax, 0)], go[(ax, 0)], gs[(ax, 1)], go[(ax, 1)],
                    self._G[ax], self._Dm[ax], b.weights, b.edge_left,
                    b.edge_right, prm.g, prm.gamma, prm.c, prm.h_floor,
                    self.spath, self.wpath)
                if flags.any():
                    raise PathThroughInvalidState(
                        "segment path crossed a dry state at a face")
            kh.assemble(self.u, self.fxi, self.fyi, self.nsi,
                        self._G[0], self._Dm[0], self._G[1], self._Dm[1],
                        mesh.is_periodic(0), mesh.is_periodic(1),
                        counts[0], counts[1], dt, *mesh.spacings,
                        b.weights, b.diff_matrix, b.edge_left, b.edge_right)
        elif d == 2:
            for ax in range(2):
                ke.face_pass_tr_2d(
                    self.tr[ax][1], self.tr[ax][0],
                    ax, mesh.is_periodic(ax), counts[0], counts[1],
                    gs[(ax, 0)], go[(ax, 0)], gs[(ax, 1)], go[(ax, 1)],
                    gu[(ax, 0)], gu[(ax, 1)], gb[(ax, 0)], gb[(ax, 1)],
                    self._G[ax], self._Dm[ax], self._Dp[ax],
                    b.weights, self.lam_e, self.mu_e, self.rho_e, self.cp_e)
            ke.assemble_2d(self.u, self.ri,
                           self._G[0], self._Dm[0], self._Dp[0],
                           self._G[1], self._Dm[1], self._Dp[1],
                           mesh.is_periodic(0), mesh.is_periodic(1),
                           counts[0], counts[1], dt, *mesh.spacings,
                           b.weights, b.edge_left, b.edge_right)
        else:
            for ax in range(3):
                ke.face_pass_tr_3d(
                    self.tr[ax][1], self.tr[ax][0],
                    ax, mesh.is_periodic(ax), *counts,
                    gs[(ax, 0)], go[(ax, 0)], gs[(ax, 1)], go[(ax, 1)],
                    gu[(ax, 0)], gu[(ax, 1)], gb[(ax, 0)], gb[(ax, 1)],
                    self._G[ax], self._Dm[ax], self._Dp[ax],
                    b.weights, self.lam_e, self.mu_e, self.rho_e, self.cp_e)
            ke.assemble_3d(self.u, self.ri,
                           self._G[0], self._Dm[0], self._Dp[0],
                           self._G[1], self._Dm[1], self._Dp[1],
                           self._G[2], self._Dm[2], self._Dp[2],
                           mesh.is_periodic(0), mesh.is_periodic(1),
                           mesh.is_periodic(2), *counts, dt, *mesh.spacings,
                           b.weights, b.edge_left, b.edge_right)
        self._apply_point_sources(t, dt)

    def _apply_point_sources(self, t, dt):
        if not self.point_sources:
            return
        w = self.basis.weights
        taus = self.basis.nodes
        for src in self.point_sources:
            amp = dt * sum(w[a] * src.time_fn(t + taus[a] * dt)
                           for a in range(self.n))
            for e, screen in zip(src.elements, src.screens):
                self.u[e, ..., src.var] += amp * screen

    def step(self, t: float, dt: float):
        """One full predictor + corrector cycle."""
        self.predict_phase(dt)
        self.resolve_boundaries(t, dt)
        self.correct_phase(t, dt)

    # -- measurement ----------------------------------------------------

    def evaluate_at(self, point) -> np.ndarray:
        """DG polynomial of the containing element at the exact coordinate."""
        idx, ref = self.mesh.to_reference(point)
        e = self.mesh.element_id(idx)
        ws = [self.basis.eval_at(np.array([r]))[0] for r in ref]
        if self.mesh.dim == 2:
            return np.einsum("i,j,ijv->v", ws[0], ws[1], self.u[e])
        return np.einsum("i,j,k,ijkv->v", ws[0], ws[1], ws[2], self.u[e])

    def l2_error(self, ref_fn, transform=None, n_quad: Optional[int] = None):
        """Mesh L2 errors per variable with Gauss over-integration.

        ``ref_fn(points)`` returns reference states at physical points;
        ``transform`` optionally maps state arrays to the measured variables
        (both solution and reference pass through it).
        """
        nq = n_quad if n_quad is not None else self.degree + 2
        qn, qw = gauss_legendre(nq)
        Eev = self.basis.eval_at(qn)
        mesh = self.mesh
        vol = float(np.prod(mesh.spacings))
        if mesh.dim == 2:
            uq = np.einsum("pi,qj,eijv->epqv", Eev, Eev, self.u)
            pts = self._quad_grid(qn)
            wgt = np.einsum("p,q->pq", qw, qw) * vol
        else:
            uq = np.einsum("pi,qj,rk,eijkv->epqrv", Eev, Eev, Eev, self.u)
            pts = self._quad_grid(qn)
            wgt = np.einsum("p,q,r->pqr", qw, qw, qw) * vol
        ref = ref_fn(pts)
        if transform is not None:
            uq = transform(uq)
            ref = transform(ref)
        diff2 = (uq - ref) ** 2
        if mesh.dim == 2:
            tot = np.einsum("epqv,pq->v", diff2, wgt)
        else:
            tot = np.einsum("epqrv,pqr->v", diff2, wgt)
        return np.sqrt(tot)

    def _quad_grid(self, qn):
        return self.mesh.node_grid(np.asarray(qn))

    def integrals(self) -> np.ndarray:
        """Mesh integral of every conserved variable."""
        w = self.basis.weights
        vol = float(np.prod(self.mesh.spacings))
        if self.mesh.dim == 2:
            return np.einsum("i,j,eijv->v", w, w, self.u) * vol
        return np.einsum("i,j,k,eijkv->v", w, w, w, self.u) * vol
