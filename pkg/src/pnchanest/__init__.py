"""PN-correlation channel estimation for TDS-OFDM.

A library plus command-line Monte Carlo simulator for estimating multipath
channel impulse responses from the PN guard intervals of TDS-OFDM frames,
with closed-form MSE predictions and Cramer-Rao bounds for every estimator.
"""

from .analysis import (
    crb,
    crb_full,
    crb_truncated,
    error_floor_snr_db,
    mse_correlation,
    mse_full_inverse,
    mse_interference_subtraction,
    mse_truncated_inverse,
    predicted_mse,
)
from .channel import (
    HT,
    PROFILES,
    TU6,
    ChannelProfile,
    ChannelRealization,
    ReceivedPn,
    load_profile,
    quantize_profile,
    realize_channel,
    receive_pn,
    receive_via_gi,
)
from .estimators import (
    CirEstimate,
    CorrelationEstimator,
    EstimatorMethod,
    FullInverseEstimator,
    InterferenceSubtractionEstimator,
    TruncatedInverseEstimator,
    correlation_estimate,
    estimate_cir,
    make_estimator,
    refine_estimate,
    refine_full_inverse,
    refine_subtract_interference,
    refine_truncated_inverse,
)
from .harness import (
    ALL_METHODS,
    CSV_COLUMNS,
    MseReport,
    MseRow,
    SweepConfig,
    emit_report,
    load_report,
    run_sweep,
    trial_rng,
)
from .sequences import (
    DEFAULT_POLYNOMIALS,
    DTMB_PRESETS,
    GuardInterval,
    MSequence,
    circular_autocorrelation,
    dtmb_guard_interval,
    generate_m_sequence,
)
from .structured import (
    OpCounter,
    TwoValuedMatrix,
    correlation_inverse,
    correlation_matrix,
    dense_correlation_inverse,
    dense_correlation_matrix,
    dense_matvec,
    dense_truncated_correlation_inverse,
    interference_subtractor,
    truncated_correlation_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_METHODS",
    "CSV_COLUMNS",
    "ChannelProfile",
    "ChannelRealization",
    "CirEstimate",
    "CorrelationEstimator",
    "DEFAULT_POLYNOMIALS",
    "DTMB_PRESETS",
    "EstimatorMethod",
    "FullInverseEstimator",
    "GuardInterval",
    "HT",
    "InterferenceSubtractionEstimator",
    "MSequence",
    "MseReport",
    "MseRow",
    "OpCounter",
    "PROFILES",
    "ReceivedPn",
    "SweepConfig",
    "TU6",
    "TruncatedInverseEstimator",
    "TwoValuedMatrix",
    "circular_autocorrelation",
    "correlation_estimate",
    "correlation_inverse",
    "correlation_matrix",
    "crb",
    "crb_full",
    "crb_truncated",
    "dense_correlation_inverse",
    "dense_correlation_matrix",
    "dense_matvec",
    "dense_truncated_correlation_inverse",
    "dtmb_guard_interval",
    "emit_report",
    "error_floor_snr_db",
    "estimate_cir",
    "generate_m_sequence",
    "interference_subtractor",
    "load_profile",
    "load_report",
    "make_estimator",
    "mse_correlation",
    "mse_full_inverse",
    "mse_interference_subtraction",
    "mse_truncated_inverse",
    "predicted_mse",
    "quantize_profile",
    "realize_channel",
    "receive_pn",
    "receive_via_gi",
    "refine_estimate",
    "refine_full_inverse",
    "refine_subtract_interference",
    "refine_truncated_inverse",
    "run_sweep",
    "trial_rng",
    "truncated_correlation_inverse",
]
