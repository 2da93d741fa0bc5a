"""Distribution of the ratio Z = X/Y of two independent xgamma variables.

Closed-form density, survival, and cdf; quantiles; fractional moments of
order in (-1, 1); Shannon/Renyi/Tsallis entropies; truncated-moment
characterization checks; exact mixture sampling; and maximum-likelihood
parameter fitting.
"""

from . import characterization, entropy, estimation, numerics, ratio, xgamma
from .characterization import (
    CharacterizationReport,
    TruncationSide,
    run_characterization_checks,
)
from .errors import (
    BracketingError,
    ConvergenceError,
    DataError,
    DivergenceError,
    DomainError,
    EntropyOrderError,
    MomentExistenceError,
    XGRatioError,
)
from .estimation import FitResult, fit_mle, log_likelihood, read_samples
from .numerics import QuadConfig, RandomState
from .ratio import RatioParams, SampleBatch
from .xgamma import XGammaParams

__version__ = "0.1.0"

__all__ = [
    "characterization",
    "entropy",
    "estimation",
    "numerics",
    "ratio",
    "xgamma",
    "CharacterizationReport",
    "TruncationSide",
    "run_characterization_checks",
    "BracketingError",
    "ConvergenceError",
    "DataError",
    "DivergenceError",
    "DomainError",
    "EntropyOrderError",
    "MomentExistenceError",
    "XGRatioError",
    "FitResult",
    "fit_mle",
    "log_likelihood",
    "read_samples",
    "QuadConfig",
    "RandomState",
    "RatioParams",
    "SampleBatch",
    "XGammaParams",
    "__version__",
]
