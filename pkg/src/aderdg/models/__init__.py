from .base import HyperbolicModel
from .hsgn import Hsgn, HsgnParams
from .elastic import (
    Elastic2D,
    Elastic3D,
    ElasticParams,
    MaterialRegion,
    elastic_plane_wave_eigenvectors,
)

__all__ = [
    "HyperbolicModel",
    "Hsgn",
    "HsgnParams",
    "Elastic2D",
    "Elastic3D",
    "ElasticParams",
    "MaterialRegion",
    "elastic_plane_wave_eigenvectors",
]
