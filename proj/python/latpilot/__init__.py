"""LMMSE-optimal lattice pilot design for doubly dispersive OFDM grids."""

from ._core import (
    ChannelProfile,
    ChannelSampler,
    ConditionReport,
    DiagonalCount,
    Domain,
    ErrorReport,
    FeasibilityRegion,
    GridConfig,
    HermitianToeplitz,
    KroneckerCovariance,
    LatticeSpec,
    MseRecord,
    NoiseDataStats,
    PilotPattern,
    PowerProfile,
    QuadratureSpec,
    RegionViolation,
    SimConfig,
    TruncatedDFTFactor,
    TruncationRank,
    __version__,
    assemble_covariance,
    build_factor_exact,
    build_factor_sinc,
    check_condition_analytic,
    check_condition_fft,
    dft_diagonalize,
    empirical_mse,
    enumerate_offsets,
    error_covariance_approx,
    error_covariance_exact,
    gram_matrix,
    lag_step,
    lmmse_estimate,
    lower_bound,
    lower_bound_spread_approx,
    mask_from_lattice,
    mask_spectrum,
    pilot_snr,
    rel_fro_error,
    rel_kron_error,
    search_lattices,
    sinc_factor,
    spectral_density,
    truncation_rank,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
