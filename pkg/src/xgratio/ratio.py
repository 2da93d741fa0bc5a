"""Distribution of Z = X / Y for independent xgamma variables X and Y.

X carries parameter alpha, Y carries parameter beta. The survival function
and density have closed forms; fractional moments of order k in (-1, 1)
reduce to Beta-function sums; orders with |k| >= 1 diverge because the
density decays only quadratically.

All closed-form evaluations factor powers of 1 / (alpha z + beta) out first
(Horner-style nesting in r = 1/(alpha z + beta) and phi = z r), so large z
cannot overflow and, every term being positive, cancellation cannot occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import xgamma
from .errors import DataError, DomainError, MomentExistenceError
from .numerics import (
    DEFAULT_QUAD,
    QuadConfig,
    RandomState,
    beta_fn,
    find_root,
    integrate_finite,
)

__all__ = [
    "RatioParams",
    "SampleBatch",
    "kernel",
    "log_kernel",
    "pdf",
    "survival",
    "cdf",
    "quantile",
    "fractional_moment",
    "incomplete_moment",
    "hazard",
    "reverse_hazard",
    "sample",
]

# beyond this point the quadratic tail dominates the kernel to ~1e-8
_ASYMPTOTIC_Z = 1e8


@dataclass(frozen=True)
class RatioParams:
    """Parameter pair of the ratio law: alpha for the numerator variable,
    beta for the denominator variable; both strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    @property
    def normalizing_constant(self) -> float:
        """alpha^2 beta^2 / ((1+alpha)(1+beta)), the factor turning the
        rational kernel into the density."""
        a, b = self.alpha, self.beta
        return (a * a / (1.0 + a)) * (b * b / (1.0 + b))

    def swapped(self) -> "RatioParams":
        """Parameters of 1/Z, which follows the same family with the roles
        of numerator and denominator exchanged."""
        return RatioParams(self.beta, self.alpha)


def _check_order(k: float) -> None:
    if not -1.0 < k < 1.0:
        raise MomentExistenceError(
            f"fractional moments exist only for orders in (-1, 1), got {k}"
        )


def _as_nonnegative_array(z, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"{name} is defined for z >= 0")
    return arr, arr.ndim == 0


def kernel(params: RatioParams, z):
    """Rational kernel h(z) with pdf(z) = normalizing_constant * h(z).

    h(z) = 1/s^2 + 3 (alpha z^2 + beta)/s^4 + 30 alpha beta z^2 / s^6
    with s = alpha z + beta, evaluated in nested form.
    """
    arr, scalar = _as_nonnegative_array(z, "kernel")
    a, b = params.alpha, params.beta
    r = 1.0 / (a * arr + b)
    phi = arr * r
    out = r * r * ((1.0 + 3.0 * a * phi**2) + r * r * b * (3.0 + 30.0 * a * phi**2))
    return float(out) if scalar else out


def log_kernel(params: RatioParams, z):
    """ln h(z), switching to the quadratic-tail expansion for very large z
    where direct evaluation of the kernel would underflow."""
    arr, scalar = _as_nonnegative_array(z, "log_kernel")
    a = params.alpha
    out = np.empty_like(arr)
    near = arr <= _ASYMPTOTIC_Z
    if np.any(near):
        out[near] = np.log(kernel(params, arr[near]))
    if not np.all(near):
        # h(z) ~ (alpha + 3) / (alpha^3 z^2) in the tail
        far = ~near
        out[far] = math.log((a + 3.0) / a**3) - 2.0 * np.log(arr[far])
    return float(out) if scalar else out


def pdf(params: RatioParams, z):
    """Density of Z at z >= 0. Accepts scalars or arrays.

    Strictly positive on [0, inf) with f(0) = alpha^2 (beta + 3) /
    ((1+alpha) beta (1+beta)) and quadratic tail decay.
    """
    arr, scalar = _as_nonnegative_array(z, "pdf")
    out = params.normalizing_constant * kernel(params, arr)
    return float(out) if scalar else out


def survival(params: RatioParams, z):
    """P(Z > z) in closed form; equals 1 exactly at z = 0."""
    arr, scalar = _as_nonnegative_array(z, "survival")
    a, b = params.alpha, params.beta
    r = 1.0 / (a * arr + b)
    phi = arr * r
    ap1 = 1.0 + a
    bracket = (
        1.0
        + a * phi * (1.0 + a * phi) / ap1
        + r * r * b * (1.0 + 3.0 * a * phi * (1.0 + 2.0 * a * phi) / ap1)
    )
    out = (b * b / (1.0 + b)) * r * bracket
    out = np.where(arr == 0.0, 1.0, out)  # algebraically exact at the origin
    return float(out) if scalar else out


def cdf(params: RatioParams, z):
    """P(Z <= z), the complement of the closed-form survival function."""
    arr, scalar = _as_nonnegative_array(z, "cdf")
    out = 1.0 - survival(params, arr)
    return float(out) if scalar else out


def quantile(params: RatioParams, prob: float) -> float:
    """Value z with cdf(z) = prob, for prob strictly inside (0, 1).

    The bracket starts at [1/(1+max(alpha,beta)), 1 + 1/min(alpha,beta)]
    and is grown geometrically; a fixed upper bracket would be unsafe
    because the quadratic tail pushes high quantiles far out.
    """
    if not 0.0 < prob < 1.0:
        raise DomainError(f"prob must lie in (0, 1), got {prob}")
    a, b = params.alpha, params.beta
    lo = 1.0 / (1.0 + max(a, b))
    hi = 1.0 + 1.0 / min(a, b)
    while cdf(params, lo) > prob:
        lo *= 0.5
    while cdf(params, hi) < prob:
        lo = hi
        hi *= 2.0
    root = find_root(lambda t: cdf(params, t) - prob, lo, hi, tol=1e-14)
    return float(root)


def _beta_term_sum(params: RatioParams, k: float, first_coefficient: float) -> float:
    a, b = params.alpha, params.beta
    return (
        first_coefficient * beta_fn(k + 1.0, 1.0 - k)
        + 3.0 * b * beta_fn(k + 3.0, 1.0 - k)
        + 3.0 * a * beta_fn(k + 1.0, 3.0 - k)
        + 30.0 * beta_fn(k + 3.0, 3.0 - k)
    )


def fractional_moment(params: RatioParams, k: float) -> float:
    """E[Z^k] for -1 < k < 1 via the closed Beta-function sum.

    The first Beta term carries the coefficient alpha * beta; that
    coefficient is forced by the normalization E[Z^0] = 1 (the variant
    with coefficient 1 fails it, see the regression test). Order 0
    returns exactly 1.
    """
    _check_order(k)
    if k == 0.0:
        return 1.0
    a, b = params.alpha, params.beta
    scale = (b / a) ** k / ((1.0 + a) * (1.0 + b))
    return scale * _beta_term_sum(params, k, first_coefficient=a * b)


def incomplete_moment(
    params: RatioParams,
    k: float,
    z: float,
    cfg: QuadConfig = DEFAULT_QUAD,
) -> float:
    """Partial moment integral of u^k pdf(u) from 0 to z, for -1 < k < 1.

    Nondecreasing in z and converging to fractional_moment(k) as z grows.
    For k < 0 the integrand has an integrable singularity at 0; on
    [0, min(z, 1)] the substitution u = s^(1/(1+k)) removes it exactly,
    leaving pdf(s^(1/(1+k))) / (1+k) to integrate in s.
    """
    _check_order(k)
    if z < 0:
        raise DomainError(f"incomplete_moment is defined for z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    split = min(z, 1.0)
    if k < 0:
        power = 1.0 / (1.0 + k)

        def desingularized(s):
            return pdf(params, np.asarray(s) ** power) * power

        lower = integrate_finite(desingularized, 0.0, split ** (1.0 + k), cfg)
    else:

        def monomial_weighted(u):
            u = np.asarray(u)
            return u**k * pdf(params, u)

        lower = integrate_finite(monomial_weighted, 0.0, split, cfg)
    if z <= split:
        return lower

    def monomial_weighted_tail(u):
        u = np.asarray(u)
        return u**k * pdf(params, u)

    return lower + integrate_finite(monomial_weighted_tail, split, z, cfg)


def hazard(params: RatioParams, z):
    """Failure rate pdf / survival; behaves like 1/z in the far tail."""
    arr, scalar = _as_nonnegative_array(z, "hazard")
    out = pdf(params, arr) / survival(params, arr)
    return float(out) if scalar else out


def reverse_hazard(params: RatioParams, z):
    """Reverse failure rate pdf / cdf, defined for z > 0 only (the cdf
    vanishes at the origin)."""
    arr, scalar = _as_nonnegative_array(z, "reverse_hazard")
    if np.any(arr == 0.0):
        raise DomainError("reverse_hazard is undefined at z = 0 (cdf is 0)")
    out = pdf(params, arr) / cdf(params, arr)
    return float(out) if scalar else out


@dataclass(frozen=True)
class SampleBatch:
    """Ordered batch of positive draws, tagged with the seed that produced
    it when the batch came from the simulator."""

    values: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DataError("a sample batch must be a non-empty 1-d collection")
        bad = np.nonzero(~(values > 0))[0]
        if bad.size:
            raise DataError(
                f"observation at index {int(bad[0])} is not positive: "
                f"{values[bad[0]]!r}"
            )
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


def sample(params: RatioParams, n: int, rng: RandomState) -> SampleBatch:
    """n exact draws of Z, each the ratio of a numerator draw to an
    independent denominator draw taken from split child streams."""
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    numerator_stream, denominator_stream = rng.split(2)
    x = xgamma.sample_many(xgamma.XGammaParams(params.alpha), n, numerator_stream)
    y = xgamma.sample_many(xgamma.XGammaParams(params.beta), n, denominator_stream)
    return SampleBatch(values=x / y, seed=rng.seed)
