"""Qudit data re-uploading circuits as multi-dimensional Fourier models."""

from .circuits import (
    AnsatzSpec,
    EncodingSpec,
    ParameterVector,
    build_state,
    default_observable,
    encoding_gate,
    expectation,
    expectation_many,
    param_count,
    spin_eigenvalues,
    trainable_gate,
)
from .errors import (
    CircuitTooLargeError,
    ConvergenceError,
    UnsupportedEncodingError,
    ValidationError,
)
from .estimator import FourierCircuitRegressor
from .fitting import (
    FitResult,
    LabeledDataset,
    OptimizerConfig,
    accuracy,
    fit,
    make_dataset,
    mse_cost,
    nelder_mead,
)
from .fourier import (
    AuditReport,
    AuditRow,
    FourierSeries,
    NoncommutingReport,
    audit,
    crossover_degree,
    degeneracy,
    degeneracy_multi,
    dof,
    evaluate_series,
    extract_analytic,
    extract_sampling,
    model_degree,
    noncommuting_spectrum_check,
    num_coefficients,
    spectrum,
    trig_to_exp,
)
from .numerics import apply_gate, gellmann_basis, hermitian_eig, unitary_exp

__all__ = [
    "AnsatzSpec",
    "AuditReport",
    "AuditRow",
    "CircuitTooLargeError",
    "ConvergenceError",
    "EncodingSpec",
    "FitResult",
    "FourierCircuitRegressor",
    "FourierSeries",
    "LabeledDataset",
    "NoncommutingReport",
    "OptimizerConfig",
    "ParameterVector",
    "UnsupportedEncodingError",
    "ValidationError",
    "accuracy",
    "apply_gate",
    "audit",
    "build_state",
    "crossover_degree",
    "default_observable",
    "degeneracy",
    "degeneracy_multi",
    "dof",
    "encoding_gate",
    "evaluate_series",
    "expectation",
    "expectation_many",
    "extract_analytic",
    "extract_sampling",
    "fit",
    "gellmann_basis",
    "hermitian_eig",
    "make_dataset",
    "model_degree",
    "mse_cost",
    "nelder_mead",
    "noncommuting_spectrum_check",
    "num_coefficients",
    "param_count",
    "spectrum",
    "spin_eigenvalues",
    "trainable_gate",
    "trig_to_exp",
    "unitary_exp",
]
