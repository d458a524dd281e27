"""Kernel conjugate-gradient regression with early stopping and rate experiments."""

from .errors import InvalidInput, NotReached, NumericalFailure, Unsupported
from .harness import (
    CompareReport,
    ExperimentConfig,
    RateReport,
    RunRecord,
    SlopeFit,
    canonical_json,
    compare_solvers,
    config_hash,
    derive_seed,
    fit_loglog_slope,
    run_experiment,
    write_compare_csv,
    write_compare_json,
    write_plot_tsv,
    write_rows_csv,
    write_summary_json,
)
from .evaluation import (
    EffectiveDimension,
    ErrorReport,
    effective_dimension,
    error_norm,
    estimator_spectrum,
    kahan_sum,
)
from .kernels import (
    GaussianKernel,
    KernelMatrix,
    KernelSpec,
    MercerKernel,
    build_kernel_matrix,
    kn_inner,
)
from .solvers import CgTrace, RidgeSolution, cg_fit, krylov_oracle, predict, ridge_fit
from .stopping import (
    ThresholdParams,
    ThresholdResult,
    discrepancy_stop,
    holdout_select,
    threshold_calibrated,
    threshold_inner,
    threshold_outer,
)
from .synth import (
    RNG_ALGORITHM,
    GaussianBernstein,
    MercerModel,
    NoiseSpec,
    Sample,
    UniformBounded,
    draw_sample,
    eval_target,
    make_model,
    model_from_dict,
    model_to_dict,
    padded_total,
    sample_from_dict,
    sample_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "InvalidInput",
    "NotReached",
    "NumericalFailure",
    "Unsupported",
    "GaussianKernel",
    "MercerKernel",
    "KernelSpec",
    "KernelMatrix",
    "build_kernel_matrix",
    "kn_inner",
    "CgTrace",
    "RidgeSolution",
    "cg_fit",
    "krylov_oracle",
    "ridge_fit",
    "predict",
    "ThresholdParams",
    "ThresholdResult",
    "threshold_inner",
    "threshold_outer",
    "threshold_calibrated",
    "discrepancy_stop",
    "holdout_select",
    "RNG_ALGORITHM",
    "MercerModel",
    "Sample",
    "NoiseSpec",
    "UniformBounded",
    "GaussianBernstein",
    "make_model",
    "draw_sample",
    "eval_target",
    "padded_total",
    "model_to_dict",
    "model_from_dict",
    "sample_to_dict",
    "sample_from_dict",
    "ErrorReport",
    "EffectiveDimension",
    "estimator_spectrum",
    "error_norm",
    "effective_dimension",
    "kahan_sum",
    "ExperimentConfig",
    "RunRecord",
    "RateReport",
    "SlopeFit",
    "CompareReport",
    "run_experiment",
    "compare_solvers",
    "fit_loglog_slope",
    "derive_seed",
    "config_hash",
    "canonical_json",
    "write_rows_csv",
    "write_summary_json",
    "write_plot_tsv",
    "write_compare_csv",
    "write_compare_json",
    "__version__",
]
