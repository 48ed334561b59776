"""One-way coupling of the water column onto the elastic sea bottom.

The fluid mesh is an exact integer refinement of the solid top face.  Every
quadrature node of a solid top-face element maps into one fluid cell with
reference coordinates obtained by integer arithmetic (the Gauss nodes are
interior, so no containment ambiguity can arise at subcell boundaries).
Each synchronized step samples the fluid space-time predictor at those
points and times, and the solid sees the traction condition

    sigma_xz = sigma_yz = 0,   sigma_zz = rho_w g h

weakly through a reflected ghost state, exactly like the free surface.
The fluid never reads solid data, so coupled fluid dofs are bit-identical
to an uncoupled run with the same step sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels_elastic as ke
from .basis import Basis1D
from .errors import NonNestedMeshes, NonPositiveDepth
from .mesh import COUPLED, CartesianMesh
from .solver import DomainSolver

#: traction rows of the 3D state (szz, syz, sxz)
SZZ, SYZ, SXZ = 2, 4, 5


@dataclass(frozen=True)
class CouplingMap:
    """Correspondence from solid top-face quadrature points to fluid cells."""

    refinement: tuple
    rho_w: float
    cells: np.ndarray = field(repr=False)
    ref_coords: np.ndarray = field(repr=False)
    wx: np.ndarray = field(repr=False)
    wy: np.ndarray = field(repr=False)
    point_shape: tuple = ()

    @property
    def n_points(self) -> int:
        return self.cells.shape[0]


def build_coupling(solid_mesh: CartesianMesh, fluid_mesh: CartesianMesh,
                   rho_w: float, solid_degree: int, fluid_degree: int
                   ) -> CouplingMap:
    """Deterministic point map from the solid top face into the fluid grid."""
    for a in range(2):
        if not (np.isclose(solid_mesh.lo[a], fluid_mesh.lo[a], rtol=0, atol=1e-12)
                and np.isclose(solid_mesh.hi[a], fluid_mesh.hi[a], rtol=0,
                               atol=1e-12)):
            raise NonNestedMeshes(f"horizontal extents differ on axis {a}")
    refinement = []
    for a in range(2):
        fc, sc = fluid_mesh.counts[a], solid_mesh.counts[a]
        if fc % sc != 0:
            raise NonNestedMeshes(
                f"axis {a}: fluid count {fc} not a multiple of solid {sc}")
        refinement.append(fc // sc)
    rx, ry = refinement
    sb = Basis1D.make(solid_degree)
    fb = Basis1D.make(fluid_degree)
    n = sb.npts
    ncx, ncy = solid_mesh.counts[0], solid_mesh.counts[1]
    cells = np.empty(ncx * ncy * n * n, dtype=np.int64)
    refc = np.empty((cells.size, 2))
    p = 0
    for ix in range(ncx):
        for iy in range(ncy):
            for i in range(n):
                sx = rx * sb.nodes[i]
                subx = int(np.floor(sx))
                fx = ix * rx + subx
                for j in range(n):
                    sy = ry * sb.nodes[j]
                    suby = int(np.floor(sy))
                    fy = iy * ry + suby
                    cells[p] = fx * fluid_mesh.counts[1] + fy
                    refc[p, 0] = sx - subx
                    refc[p, 1] = sy - suby
                    p += 1
    wx = fb.eval_at(refc[:, 0])
    wy = fb.eval_at(refc[:, 1])
    return CouplingMap(refinement=(rx, ry), rho_w=rho_w, cells=cells,
                       ref_coords=refc, wx=wx, wy=wy,
                       point_shape=(ncx, ncy, n, n))


def sample_fluid_var(cmap: CouplingMap, fluid_q: np.ndarray,
                     time_weights: np.ndarray, var: int) -> np.ndarray:
    """Fluid predictor variable at every mapped point and requested time.

    ``time_weights[a_out, a_f]`` are the fluid time-basis values at the
    output time nodes; returns shape (n_points, n_out_times).
    """
    nt_f = fluid_q.shape[3]
    spatial = np.empty((cmap.n_points, nt_f))
    ke.eval_predictor_var_2d(fluid_q, cmap.cells, cmap.wx, cmap.wy, var, spatial)
    return spatial @ time_weights.T


def fluid_depth_at(cmap: CouplingMap, fluid_q: np.ndarray, point: int,
                   tau: float, fluid_degree: int) -> float:
    """Water depth from the fluid space-time predictor at one mapped point."""
    fb = Basis1D.make(fluid_degree)
    tw = fb.eval_at(np.array([tau]))
    h = sample_fluid_var(cmap, fluid_q, tw, 0)[point, 0]
    if h <= 0:
        raise NonPositiveDepth(f"sampled depth {h} at coupling point {point}")
    return float(h)


def solid_top_ghost(cmap: CouplingMap, h: float, q_minus: np.ndarray,
                    g: float = 9.81) -> np.ndarray:
    """Ghost state enforcing sigma_zz = rho_w g h and zero shear weakly.

    The Riemann midpoint 0.5 (q- + q+) then carries exactly the target
    traction.  Sign convention follows the coupling condition literally:
    sigma_zz at the face equals +rho_w g h.
    """
    if h <= 0:
        raise NonPositiveDepth(f"coupling depth {h} must be positive")
    q_plus = np.asarray(q_minus, dtype=float).copy()
    q_plus[SZZ] = 2.0 * cmap.rho_w * g * h - q_minus[SZZ]
    q_plus[SYZ] = -q_minus[SYZ]
    q_plus[SXZ] = -q_minus[SXZ]
    return q_plus


def synchronized_dt(dt_fluid: float, dt_solid: float) -> float:
    """Common step of a coupled cycle: the lowest of the two."""
    return min(dt_fluid, dt_solid)


class CoupledSolver:
    """Synchronized one-way stepping of a fluid and a solid domain.

    The fluid predictor of the current step is published before any solid
    face reads it; the fluid corrector never sees solid data.  When
    ``include_nonhydrostatic`` is set, the boundary load uses
    rho_w (g h + h p) instead of the literal rho_w g h.
    """

    def __init__(self, fluid: DomainSolver, solid: DomainSolver,
                 rho_w: float = 1000.0, include_nonhydrostatic: bool = False):
        if solid.mesh.dim != 3 or fluid.mesh.dim != 2:
            raise ValueError("coupling expects a 3D solid and a 2D fluid")
        spec = solid.mesh.boundary(2, 1)
        if spec.kind != COUPLED:
            raise ValueError("solid top face must be marked 'coupled'")
        self.fluid = fluid
        self.solid = solid
        self.include_nonhydrostatic = include_nonhydrostatic
        self.cmap = build_coupling(solid.mesh, fluid.mesh, rho_w,
                                   solid.degree, fluid.degree)
        self.patch = solid.patches[(2, 1)]
        # fluid time basis sampled at the solid corrector time nodes
        fb = fluid.basis
        self._tw = fb.eval_at(solid.basis.nodes)
        self._g = fluid.model.params.g

    def compute_dt(self, cfl_fluid: float, cfl_solid: float) -> float:
        return synchronized_dt(self.fluid.compute_dt(cfl_fluid),
                               self.solid.compute_dt(cfl_solid))

    def _update_offsets(self):
        cmap = self.cmap
        h = sample_fluid_var(cmap, self.fluid.q, self._tw, 0)
        if h.min() <= 0:
            raise NonPositiveDepth("sampled non-positive depth at the interface")
        load = self._g * h
        if self.include_nonhydrostatic:
            load = load + sample_fluid_var(cmap, self.fluid.q, self._tw, 4)
        ncx, ncy, n, _ = cmap.point_shape
        nt = self._tw.shape[0]
        self._last_target = (cmap.rho_w * load).reshape(ncx, ncy, n, n, nt)
        self.patch.offset[..., SZZ] = 2.0 * self._last_target

    def step(self, t: float, dt: float):
        self.fluid.predict_phase(dt)
        self._update_offsets()
        self.fluid.resolve_boundaries(t, dt)
        self.fluid.correct_phase(t, dt)
        self.solid.step(t, dt)

    def traction_residuals(self) -> tuple[float, float]:
        """Max face-state traction errors of the last step.

        Returns (max |sigma_zz - target|, max shear magnitude) over all
        top-face quadrature points and time nodes.
        """
        solid = self.solid
        n = solid.n
        ncx, ncy, ncz = solid.mesh.counts
        ids = (np.arange(ncx)[:, None] * ncy + np.arange(ncy)[None, :]) * ncz \
            + (ncz - 1)
        trace = solid.tr[2][1][ids.ravel()]
        trace = trace.reshape(ncx, ncy, n, n, solid.n, solid.nv)
        off = self.patch.offset
        # reproduce the kernel arithmetic for the face state, then compare
        # against the independently stored load target
        ghost_szz = -trace[..., SZZ] + off[..., SZZ]
        face_szz = 0.5 * (trace[..., SZZ] + ghost_szz)
        res_n = np.abs(face_szz - self._last_target).max()
        ghost_syz = -trace[..., SYZ]
        ghost_sxz = -trace[..., SXZ]
        shear = max(np.abs(0.5 * (trace[..., SYZ] + ghost_syz)).max(),
                    np.abs(0.5 * (trace[..., SXZ] + ghost_sxz)).max())
        return float(res_n), float(shear)
