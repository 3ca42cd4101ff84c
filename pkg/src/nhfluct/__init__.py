"""Monte Carlo laboratory for entry fluctuations of analytic functions of
non-Hermitian random matrices."""

__version__ = "0.1.0"

from .ensemble import (  # noqa: E402
    BlockDecomposition,
    EnsembleSpec,
    TruncationPolicy,
    block_decompose,
    sample_matrix,
    truncate,
)
from .fluctstat import CombinationSpec, FluctuationSample, stat_f, stat_S, stat_trace_kernel, stat_Y  # noqa: E402
from .harness import (  # noqa: E402
    Check,
    ExperimentConfig,
    Report,
    Statistic,
    empirical_covariance,
    normality_test,
    qf_diagnostic,
    run_experiment,
)
from .matfun import (  # noqa: E402
    AnalyticFunction,
    ContourSpec,
    eval_contour,
    eval_series,
    exp_function,
    geometric_shifted,
    monomial,
    parse_function,
    poly,
    resolvent,
    spectral_norm,
)
from .oracles import QuadraticFormSpec, qf_clt_sample, qf_clt_samples, trace_identity_enumerate  # noqa: E402
from .theory import covariance_S, covariance_Z, covariance_Z_contour, kernel_Y, real_kernels  # noqa: E402
