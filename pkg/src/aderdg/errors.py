"""Exception types raised by the solver library."""


class AderDgError(Exception):
    """Base class for all library errors."""


class NonPositiveDepth(AderDgError):
    """Water depth at or below the dry floor where a wet state is required."""


class UnsupportedOrder(AderDgError):
    """Quadrature / polynomial order outside the supported range."""


class PicardDiverged(AderDgError):
    """Space-time predictor iteration did not reach the tolerance."""


class PathThroughInvalidState(AderDgError):
    """Segment path between face states crosses an invalid state."""


class ZeroSignalSpeed(AderDgError):
    """No signal speed available to build a CFL time step."""


class BadExtents(AderDgError):
    """Mesh extents or cell counts are not usable."""


class UnknownSpec(AderDgError):
    """Boundary specification of an unknown kind."""


class NonNestedMeshes(AderDgError):
    """Fluid mesh is not an integer refinement of the solid top face."""


class ShootingFailed(AderDgError):
    """No wave speed in the bracket produced the target soliton amplitude."""


class SingularTravelingFrame(AderDgError):
    """Traveling-frame matrix A(Q) - V*I is numerically singular."""


class ComplexEigenvalue(AderDgError):
    """Dispersion-relation radicand is negative for the given parameters."""


class OutsideDomain(AderDgError):
    """Receiver coordinate lies outside the mesh."""


class ConfigError(AderDgError):
    """Run configuration file is invalid."""
