"""Online calibration forecasters and their experiment harness."""

from ._core import (
    ConfigError,
    ContractViolation,
    ConvergenceError,
    algorithm_names,
    fit_exponent,
    kl_bernoulli,
    metrics,
    nonstationarity,
    psi,
    run_cell,
    sweep,
    theta,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "ConvergenceError",
    "algorithm_names",
    "fit_exponent",
    "kl_bernoulli",
    "metrics",
    "nonstationarity",
    "psi",
    "run_cell",
    "sweep",
    "theta",
]
