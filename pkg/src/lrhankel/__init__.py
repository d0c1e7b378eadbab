"""Low-rank Hankel reconstruction of damped exponential signals from
non-uniformly sampled data, with a synthetic-data and benchmarking harness."""

from .hankel import HankelShape, antidiag_counts, default_shape, dehankelize, hankelize
from .metrics import (
    ParameterErrors,
    PeakMatching,
    PeakSet,
    detect_peaks,
    esprit,
    hankel_diagnostics,
    match_peaks,
    parameter_errors,
    peak_correlation,
    pearson,
    rlne,
    spectrum,
)
from .sampling import (
    MaskSpec,
    SamplingMask,
    make_mask,
    poisson_gap_mask,
    truncation_mask,
    undersample,
    uniform_mask,
    zero_fill,
)
from .signals import (
    ExponentialComponent,
    ExponentialModel,
    GeneratorSpec,
    add_noise,
    corrupt_outliers,
    random_model,
    synthesize,
)
from .solvers import (
    CsConfig,
    ReconResult,
    SolverConfig,
    cs_ist_reconstruct,
    data_consistency,
    lrhm_reconstruct,
    lrhmf_reconstruct,
    nuclear_norm,
    svt,
    zero_fill_reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "HankelShape",
    "antidiag_counts",
    "default_shape",
    "dehankelize",
    "hankelize",
    "ParameterErrors",
    "PeakMatching",
    "PeakSet",
    "detect_peaks",
    "esprit",
    "hankel_diagnostics",
    "match_peaks",
    "parameter_errors",
    "peak_correlation",
    "pearson",
    "rlne",
    "spectrum",
    "MaskSpec",
    "SamplingMask",
    "make_mask",
    "poisson_gap_mask",
    "truncation_mask",
    "undersample",
    "uniform_mask",
    "zero_fill",
    "ExponentialComponent",
    "ExponentialModel",
    "GeneratorSpec",
    "add_noise",
    "corrupt_outliers",
    "random_model",
    "synthesize",
    "CsConfig",
    "ReconResult",
    "SolverConfig",
    "cs_ist_reconstruct",
    "data_consistency",
    "lrhm_reconstruct",
    "lrhmf_reconstruct",
    "nuclear_norm",
    "svt",
    "zero_fill_reconstruct",
]
