"""Time-Taylor expansions of Lagrangian fluid maps on the periodic torus."""

from .spectral import (
    NormRecord,
    SpectralError,
    SpectralField,
    WaveVector,
    ZeroMeanError,
    convolve,
    evaluate_at,
    fcz_apply,
    helmholtz_combine,
    inv_laplacian,
    laplacian,
    norm,
    spectral_derivative,
)
from .euler import (
    ResidualReport,
    SeedError,
    TaylorSeries,
    TrajectorySample,
    cauchy_residual,
    compute_series,
    evaluate_map,
    jacobian_residual,
    longitudinal_rhs,
    next_coefficient,
    transverse_rhs,
)
from .poisson import ep_compute_series, ep_evaluate_map, ep_mass_residual, ep_seed, w2, w3
from .bounds import BoundReport, RadiusEstimate, critical_time, cubic_bound_root, radius_estimate
from .abflow import ab_exact_taylor, ab_singular_time, ab_stream, ab_trajectory, ab_velocity

__version__ = "0.1.0"
