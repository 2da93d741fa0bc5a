"""The one-parameter xgamma lifetime distribution.

Supplies the numerator and denominator laws of the ratio model. The density

    f(t) = theta^2 / (1 + theta) * (1 + theta t^2 / 2) * exp(-theta t)

is an exact two-component mixture: an exponential of rate theta with weight
theta / (1 + theta), and a gamma with integer shape 3 and rate theta with the
complementary weight. The sampler exploits that decomposition directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import RandomState

__all__ = ["XGammaParams", "pdf", "cdf", "mean", "sample", "sample_many"]


@dataclass(frozen=True)
class XGammaParams:
    """Rate-like parameter theta > 0 of the xgamma law."""

    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError(f"theta must be positive, got {self.theta}")

    @property
    def exponential_weight(self) -> float:
        """Mixture weight theta / (1 + theta) of the exponential component."""
        return self.theta / (1.0 + self.theta)


def _as_nonnegative_array(t, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"{name} is defined for t >= 0")
    return arr, arr.ndim == 0


def pdf(params: XGammaParams, t):
    """Density of the xgamma law at t >= 0. Accepts scalars or arrays."""
    arr, scalar = _as_nonnegative_array(t, "pdf")
    theta = params.theta
    out = (
        theta**2
        / (1.0 + theta)
        * (1.0 + 0.5 * theta * arr**2)
        * np.exp(-theta * arr)
    )
    return float(out) if scalar else out


def cdf(params: XGammaParams, t):
    """Distribution function at t >= 0.

    Evaluated as 1 - P(t) * exp(-theta t) with the polynomial
    P(t) = (1 + theta + theta t + theta^2 t^2 / 2) / (1 + theta); every
    term of P is positive, so no cancellation occurs before the final
    subtraction.
    """
    arr, scalar = _as_nonnegative_array(t, "cdf")
    theta = params.theta
    poly = 1.0 + theta + theta * arr + 0.5 * theta**2 * arr**2
    out = 1.0 - poly * np.exp(-theta * arr) / (1.0 + theta)
    return float(out) if scalar else out


def mean(params: XGammaParams) -> float:
    """Expected value (theta + 3) / (theta (theta + 1))."""
    theta = params.theta
    return (theta + 3.0) / (theta * (theta + 1.0))


def sample(params: XGammaParams, rng: RandomState) -> float:
    """One exact draw via the exponential/gamma mixture."""
    return float(sample_many(params, 1, rng)[0])


def sample_many(
    params: XGammaParams,
    n: int,
    rng: RandomState,
    return_branch: bool = False,
):
    """n exact draws.

    With probability theta / (1 + theta) a draw is a single exponential of
    rate theta, otherwise the sum of three independent exponentials of rate
    theta (a gamma with shape 3). The stream is consumed in blocks: first
    the n branch uniforms, then the exponentials for each branch.

    Parameters
    ----------
    return_branch : bool
        When true, also return the boolean array marking draws that came
        from the single-exponential branch.
    """
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    theta = params.theta
    took_exponential = rng.uniforms(n) < params.exponential_weight
    values = np.empty(n, dtype=float)
    n_exp = int(np.count_nonzero(took_exponential))
    if n_exp:
        values[took_exponential] = rng.exponentials(theta, n_exp)
    n_gamma = n - n_exp
    if n_gamma:
        values[~took_exponential] = (
            rng.exponentials(theta, 3 * n_gamma).reshape(n_gamma, 3).sum(axis=1)
        )
    if return_branch:
        return values, took_exponential
    return values
