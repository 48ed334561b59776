"""Axis-aligned Cartesian meshes, neighbor topology and ghost-state rules.

Elements are Omega_i = [x_i - dx/2, x_i + dx/2] x ... with reference maps
x = x_lo + (idx + xi) * dx, xi in [0, 1].  Boundary conditions are resolved
weakly through ghost states; every non-periodic ghost is an affine map
sign * trace + offset of the interior trace, which covers Dirichlet data,
the elastic free surface (traction rows mirrored) and the coupled stress
condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadExtents, OutsideDomain, UnknownSpec

PERIODIC = "periodic"
DIRICHLET = "dirichlet"
FREE_SURFACE = "free_surface"
COUPLED = "coupled"

_KINDS = (PERIODIC, DIRICHLET, FREE_SURFACE, COUPLED)


@dataclass(frozen=True)
class BoundarySpec:
    """One exterior face of the domain.

    For dirichlet, ``state(points, t)`` returns the prescribed states at an
    array of face points.  Coupled faces get their data from a CouplingMap
    at run time.
    """

    kind: str
    state: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnknownSpec(f"unknown boundary kind {self.kind!r}")
        if self.kind == DIRICHLET and self.state is None:
            raise UnknownSpec("dirichlet boundary needs a state callable")


def _tracion_rows(n_vars: int, axis: int) -> tuple[int, ...]:
    """Stress components entering sigma . n for an axis-aligned normal."""
    if n_vars == 5:  # 2D (sxx, syy, sxy, u, v)
        return (0, 2) if axis == 0 else (1, 2)
    if n_vars == 9:  # 3D (sxx, syy, szz, sxy, syz, sxz, u, v, w)
        return ((0, 3, 5), (1, 3, 4), (2, 4, 5))[axis]
    raise UnknownSpec(f"free surface undefined for {n_vars} variables")


def free_surface_signs(n_vars: int, axis: int) -> np.ndarray:
    """Mirror sign vector: -1 on the rows of sigma . n, +1 elsewhere."""
    s = np.ones(n_vars)
    s[list(_tracion_rows(n_vars, axis))] = -1.0
    return s


@dataclass(frozen=True)
class CartesianMesh:
    lo: tuple
    hi: tuple
    counts: tuple
    boundaries: dict = field(default_factory=dict)

    def __post_init__(self):
        d = len(self.lo)
        if d not in (2, 3) or len(self.hi) != d or len(self.counts) != d:
            raise BadExtents("need matching 2D or 3D extents and counts")
        for a in range(d):
            if self.counts[a] < 1:
                raise BadExtents(f"axis {a}: need at least one cell")
            if not self.hi[a] > self.lo[a]:
                raise BadExtents(f"axis {a}: empty extent")
        for a in range(d):
            lo_s = self.boundary(a, 0)
            hi_s = self.boundary(a, 1)
            if (lo_s.kind == PERIODIC) != (hi_s.kind == PERIODIC):
                raise BadExtents(f"axis {a}: periodic faces must come in pairs")

    # -- geometry -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def spacings(self) -> tuple:
        return tuple((h - l) / c for l, h, c in zip(self.lo, self.hi, self.counts))

    @property
    def n_elements(self) -> int:
        return int(np.prod(self.counts))

    def boundary(self, axis: int, side: int) -> BoundarySpec:
        return self.boundaries.get((axis, side), BoundarySpec(PERIODIC))

    def is_periodic(self, axis: int) -> bool:
        return self.boundary(axis, 0).kind == PERIODIC

    def element_id(self, idx) -> int:
        e = 0
        for a in range(self.dim):
            e = e * self.counts[a] + idx[a]
        return e

    def element_idx(self, e: int) -> tuple:
        idx = []
        for a in reversed(range(self.dim)):
            idx.append(e % self.counts[a])
            e //= self.counts[a]
        return tuple(reversed(idx))

    def barycenter(self, idx) -> tuple:
        dxs = self.spacings
        return tuple(self.lo[a] + (idx[a] + 0.5) * dxs[a] for a in range(self.dim))

    def barycenters(self) -> np.ndarray:
        axes = [self.lo[a] + (np.arange(self.counts[a]) + 0.5) * self.spacings[a]
                for a in range(self.dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def to_physical(self, idx, ref) -> np.ndarray:
        """x = x_lo + (idx + xi) * dx per axis."""
        dxs = self.spacings
        ref = np.asarray(ref, dtype=float)
        return np.stack(
            [self.lo[a] + (idx[a] + ref[..., a]) * dxs[a] for a in range(self.dim)],
            axis=-1)

    def to_reference(self, point) -> tuple[tuple, np.ndarray]:
        """Containing cell index and reference coordinates of a point.

        A point exactly on an interior face belongs to the lexicographically
        smaller element (documented tie-break); domain boundary points clamp
        inward.
        """
        point = np.asarray(point, dtype=float)
        idx = []
        ref = []
        dxs = self.spacings
        for a in range(self.dim):
            if not (self.lo[a] <= point[a] <= self.hi[a]):
                raise OutsideDomain(
                    f"coordinate {point[a]} outside [{self.lo[a]}, {self.hi[a]}]")
            s = (point[a] - self.lo[a]) / dxs[a]
            i = int(np.floor(s))
            if i >= self.counts[a]:
                i = self.counts[a] - 1
            if s == i and i > 0:
                i -= 1  # on-face points evaluate from the smaller index
            idx.append(i)
            ref.append(s - i)
        return tuple(idx), np.array(ref)

    def node_axes(self, nodes1d: np.ndarray) -> list[np.ndarray]:
        """Physical DG node coordinates per axis, shape (count, len(nodes))."""
        out = []
        for a in range(self.dim):
            cells = self.lo[a] + np.arange(self.counts[a])[:, None] * self.spacings[a]
            out.append(cells + nodes1d[None, :] * self.spacings[a])
        return out

    def node_grid(self, nodes1d: np.ndarray) -> np.ndarray:
        """All DG node coordinates, shape (E, n, .., n, dim)."""
        axes = self.node_axes(nodes1d)
        n = len(nodes1d)
        shape_cells = self.counts
        grids = []
        if self.dim == 2:
            X = axes[0][:, None, :, None]
            Y = axes[1][None, :, None, :]
            Xb = np.broadcast_to(X, (*shape_cells, n, n))
            Yb = np.broadcast_to(Y, (*shape_cells, n, n))
            pts = np.stack([Xb, Yb], axis=-1)
            return pts.reshape(self.n_elements, n, n, 2)
        X = axes[0][:, None, None, :, None, None]
        Y = axes[1][None, :, None, None, :, None]
        Z = axes[2][None, None, :, None, None, :]
        Xb = np.broadcast_to(X, (*shape_cells, n, n, n))
        Yb = np.broadcast_to(Y, (*shape_cells, n, n, n))
        Zb = np.broadcast_to(Z, (*shape_cells, n, n, n))
        pts = np.stack([Xb, Yb, Zb], axis=-1)
        return pts.reshape(self.n_elements, n, n, n, 3)


def build_mesh(extents, counts, boundaries=None) -> CartesianMesh:
    """Mesh from per-axis (lo, hi) extents, cell counts, and boundary specs.

    ``boundaries`` maps axis index to either a single spec (both sides) or a
    (lo_spec, hi_spec) pair; strings are shorthand for kinds without data.
    """
    extents = [tuple(map(float, e)) for e in extents]
    counts = tuple(int(c) for c in counts)
    lo = tuple(e[0] for e in extents)
    hi = tuple(e[1] for e in extents)
    bmap = {}
    boundaries = boundaries or {}
    for a in range(len(counts)):
        spec = boundaries.get(a, PERIODIC)
        if isinstance(spec, (tuple, list)):
            lo_s, hi_s = spec
        else:
            lo_s = hi_s = spec
        for side, s in ((0, lo_s), (1, hi_s)):
            if isinstance(s, str):
                s = BoundarySpec(s)
            bmap[(a, side)] = s
    return CartesianMesh(lo=lo, hi=hi, counts=counts, boundaries=bmap)


def ghost_state(q_minus: np.ndarray, normal_axis: int, side: int,
                spec: BoundarySpec, t: float, point=None) -> np.ndarray:
    """Ghost state for one boundary face trace.

    Periodic faces are wrapped topologically by the solver and have no ghost;
    requesting one is an error.  The free-surface mirror negates exactly the
    stress rows entering sigma . n so the Riemann face state carries zero
    traction; velocities are copied.
    """
    q_minus = np.asarray(q_minus, dtype=float)
    if spec.kind == DIRICHLET:
        return np.asarray(spec.state(point, t), dtype=float)
    if spec.kind == FREE_SURFACE:
        return free_surface_signs(q_minus.shape[-1], normal_axis) * q_minus
    if spec.kind == PERIODIC:
        raise UnknownSpec("periodic boundaries are resolved topologically")
    raise UnknownSpec(f"no ghost rule for kind {spec.kind!r}")
