"""Exception hierarchy shared by all xgratio modules."""


class XGRatioError(Exception):
    """Base class for every error raised by this package."""


class DomainError(XGRatioError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class MomentExistenceError(DomainError):
    """A moment order outside the open interval (-1, 1) was requested.

    Fractional moments of the ratio distribution exist only for orders
    strictly between -1 and 1; everything else diverges.
    """


class EntropyOrderError(DomainError):
    """An entropy order that is non-positive or exactly 1."""


class DivergenceError(DomainError):
    """An entropy order in (0, 1/2] for which the defining integral diverges."""


class BracketingError(XGRatioError, ValueError):
    """A root bracket without a sign change was supplied."""


class ConvergenceError(XGRatioError, RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best estimate obtained so far and the associated error
    bound so callers can decide whether the partial result is usable.
    """

    def __init__(self, message: str, best_estimate: float, error_bound: float):
        super().__init__(
            f"{message} (best estimate {best_estimate!r}, "
            f"error bound {error_bound!r})"
        )
        self.best_estimate = best_estimate
        self.error_bound = error_bound


class DataError(XGRatioError, ValueError):
    """Observed data violates an input contract (non-positive, empty, unparseable)."""
