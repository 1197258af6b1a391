"""Gap probabilities of GUE and JUE spectra by Gram determinants, coupled
ODE systems and Painleve transcendents, with closed-form, series,
scaling-limit and Monte Carlo cross-checks."""

from .errors import (AccuracyError, BranchError, DomainError, NumericalFailure, PreconditionError,
                     SeedError, SingularityError, UnsupportedError)
from .gapcore import (GapGeometry, IntervalSet, QuadratureRule, factorization_check, gap_probability,
                      log_derivative)
from .odesys import SolverConfig, integrate
from .orthopoly import OrthonormalBasis, WeightSpec

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "BranchError", "DomainError", "NumericalFailure", "PreconditionError", "SeedError",
    "SingularityError", "UnsupportedError", "GapGeometry", "IntervalSet", "QuadratureRule",
    "factorization_check", "gap_probability", "log_derivative", "SolverConfig", "integrate",
    "OrthonormalBasis", "WeightSpec",
]
