"""gzlab: exact derivative-ratio ladders for the gamma function,
high-precision gamma/zeta evaluation with explicit error targets,
asymptotic-ladder verification, a triple-graded dominance falsifier for
candidate differential-polynomial identities, and a zeta-curve density
probe."""

from .diffpoly import (
    DiffPoly,
    c_coefficient,
    coefficient_sum,
    differentiate,
    gamma_log_ratio,
)
from .hp import ComplexHP, PrecisionConfig
from .specfun import (
    digamma_jet,
    functional_eq_residual,
    gamma,
    gamma_deriv,
    log_gamma,
    zeta_jet,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexHP",
    "DiffPoly",
    "PrecisionConfig",
    "c_coefficient",
    "coefficient_sum",
    "differentiate",
    "digamma_jet",
    "functional_eq_residual",
    "gamma",
    "gamma_deriv",
    "gamma_log_ratio",
    "log_gamma",
    "zeta_jet",
    "__version__",
]
