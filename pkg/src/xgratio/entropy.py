"""Shannon, Renyi, and Tsallis entropies of the ratio distribution.

Each measure reduces to one semi-infinite quadrature over the rational
kernel h. Because the density decays like z^-2, the integral of h^order
converges only for order > 1/2; orders at or below that threshold are
refused up front instead of letting the quadrature silently drift. The
stated order > 0 requirement is therefore sharpened, not contradicted.

The Tsallis form implemented by ``tsallis_entropy`` wraps the bracket
1 - integral(f^q) in a logarithm; the widespread convention without the
logarithm is available separately as ``tsallis_entropy_standard``. The two
differ and neither is asserted to approximate the other near q = 1.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DivergenceError, DomainError, EntropyOrderError
from .numerics import (
    DEFAULT_QUAD,
    QuadConfig,
    integrate_finite,
    integrate_semi_infinite,
)
from .ratio import RatioParams, kernel, log_kernel, pdf

__all__ = [
    "kernel",
    "log_kernel",
    "shannon_entropy",
    "renyi_entropy",
    "tsallis_entropy",
    "tsallis_entropy_standard",
    "kernel_power_integral",
]


def _check_order(order: float, allow_one: bool = False) -> None:
    if not order > 0:
        raise EntropyOrderError(f"entropy order must be positive, got {order}")
    if order <= 0.5:
        raise DivergenceError(
            f"the kernel-power integral diverges for order <= 1/2, got {order}"
        )
    if not allow_one and order == 1.0:
        raise EntropyOrderError("order 1 is excluded; use shannon_entropy")


def kernel_power_integral(
    params: RatioParams, order: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Semi-infinite integral of h(z)^order; finite exactly when order > 1/2.

    The tail beyond z = 1 behaves like z^(-2 * order); after inverting
    (z = 1/v) that leaves an algebraic factor v^(2*order - 2), which the
    further substitution v = s^(1/(2*order - 1)) absorbs exactly. Orders in
    (1/2, 1), where the factor is singular, then integrate as easily as
    orders above 1.
    """
    _check_order(order, allow_one=True)

    def kernel_power(z):
        return kernel(params, z) ** order

    head = integrate_finite(kernel_power, 0.0, 1.0, cfg)

    exponent = 1.0 / (2.0 * order - 1.0)

    def desingularized_tail(s):
        v = np.asarray(s, dtype=float) ** exponent
        z = 1.0 / v
        # h(1/v) * v^-2 stays bounded near v = 0; evaluate through the
        # log kernel so huge z cannot underflow
        return np.exp(order * (log_kernel(params, z) + 2.0 * np.log(z)))

    tail = exponent * integrate_finite(desingularized_tail, 0.0, 1.0, cfg)
    return head + tail


def shannon_entropy(params: RatioParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Differential entropy E[-ln f(Z)].

    Split as ln((1+alpha)(1+beta) / (alpha^2 beta^2)) minus the expectation
    of ln h(Z), leaving a single quadrature of ln(h) * f.
    """
    a, b = params.alpha, params.beta

    def weighted_log_kernel(z):
        return log_kernel(params, z) * pdf(params, z)

    constant = math.log((1.0 + a) * (1.0 + b) / (a * a * b * b))
    return constant - integrate_semi_infinite(weighted_log_kernel, cfg)


def renyi_entropy(
    params: RatioParams, order: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Renyi entropy of the given order (> 1/2, != 1)."""
    _check_order(order)
    const = params.normalizing_constant
    return (order / (1.0 - order)) * math.log(const) + (
        1.0 / (1.0 - order)
    ) * math.log(kernel_power_integral(params, order, cfg))


def _density_power_integral(
    params: RatioParams, order: float, cfg: QuadConfig
) -> float:
    return params.normalizing_constant**order * kernel_power_integral(
        params, order, cfg
    )


def tsallis_entropy(
    params: RatioParams, order: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Log-form Tsallis entropy ln(1 - integral(f^q)) / (1 - q).

    Requires the bracket 1 - integral(f^q) to be positive; otherwise the
    logarithm has no real value and a DomainError reports the integral.
    """
    _check_order(order)
    density_power = _density_power_integral(params, order, cfg)
    bracket = 1.0 - density_power
    if bracket <= 0.0:
        raise DomainError(
            f"log-form Tsallis entropy undefined: integral of f^{order} is "
            f"{density_power!r} >= 1"
        )
    return math.log(bracket) / (1.0 - order)


def tsallis_entropy_standard(
    params: RatioParams, order: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Conventional no-logarithm Tsallis entropy (1 - integral(f^q)) / (q - 1)."""
    _check_order(order)
    return (1.0 - _density_power_integral(params, order, cfg)) / (order - 1.0)
