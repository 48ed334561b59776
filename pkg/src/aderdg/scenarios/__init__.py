from .soliton import (
    SolitonProfile,
    build_soliton,
    soliton_ode_rhs,
    traveling_frame_matrix,
    source_1d,
)
from .elastic_waves import (
    LambSource,
    PlaneWaveExact,
    gaussian_pwave_init,
    gaussian_w_init,
    lamb_time_factor,
    pswave_init,
)
from .hsgn_cases import (
    dispersion_lambda,
    linearized_matrix,
    sinusoidal_init,
    sinusoidal_mode_vector,
    step_bathymetry,
)

__all__ = [
    "SolitonProfile",
    "build_soliton",
    "soliton_ode_rhs",
    "traveling_frame_matrix",
    "source_1d",
    "LambSource",
    "PlaneWaveExact",
    "gaussian_pwave_init",
    "gaussian_w_init",
    "lamb_time_factor",
    "pswave_init",
    "dispersion_lambda",
    "linearized_matrix",
    "sinusoidal_init",
    "sinusoidal_mode_vector",
    "step_bathymetry",
]
