"""High order ADER-DG solvers for dispersive water waves and seismic waves.

The library couples a hyperbolic reformulation of the Serre-Green-Naghdi
dispersive shallow-water model with the velocity-stress form of linear
elasticity on Cartesian grids, both advanced by one and the same one-step
ADER discontinuous Galerkin scheme with Rusanov fluxes and path-conservative
jump terms.  See README.md for entry points and the benchmark suite.
"""

from .basis import Basis1D, gauss_legendre
from .dgcore import cfl_dt, path_jump, picard_residual, predict, rusanov
from .errors import *  # noqa: F401,F403
from .mesh import BoundarySpec, CartesianMesh, build_mesh, ghost_state
from .models import (
    Elastic2D,
    Elastic3D,
    ElasticParams,
    Hsgn,
    HsgnParams,
    MaterialRegion,
    elastic_plane_wave_eigenvectors,
)
from .coupling import (
    CoupledSolver,
    CouplingMap,
    build_coupling,
    fluid_depth_at,
    solid_top_ghost,
    synchronized_dt,
)
from .solver import DomainSolver

__version__ = "0.1.0"
