"""Maximum-likelihood fitting of the ratio parameters from observed data,
plus file ingestion and curvature-based standard errors.

The optimizer works in (ln alpha, ln beta): positivity then holds by
construction and the search is unconstrained. No closed-form score
equations are used; the simplex minimizer does all the work, started from
several points because the likelihood can be flat along directions where
the two parameters trade off.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DomainError
from .numerics import NelderMeadOptions, minimize_nelder_mead
from .ratio import RatioParams, SampleBatch, fractional_moment, pdf

__all__ = [
    "FitResult",
    "StdErrReport",
    "log_likelihood",
    "fit_mle",
    "hessian_standard_errors",
    "read_samples",
]

_MIN_FIT_SIZE = 10


@dataclass(frozen=True)
class FitResult:
    """Point estimate and diagnostics of one maximum-likelihood fit."""

    alpha_hat: float
    beta_hat: float
    log_likelihood: float
    converged: bool
    iterations: int
    standard_errors: tuple[float, float] | None = None

    @property
    def params(self) -> RatioParams:
        return RatioParams(self.alpha_hat, self.beta_hat)


@dataclass(frozen=True)
class StdErrReport:
    """Curvature diagnostics at a candidate optimum.

    ``se`` is None when the negative Hessian is not positive definite;
    ``gradient_norm`` should be near zero at a true interior optimum.
    """

    se: tuple[float, float] | None
    gradient_norm: float
    hessian: np.ndarray
    note: str


def log_likelihood(params: RatioParams, data: SampleBatch) -> float:
    """Sum of log densities over the batch."""
    return float(np.sum(np.log(pdf(params, data.values))))


def _moment_matched_start(data: SampleBatch) -> RatioParams:
    """Coarse grid search matching the half-order fractional moments.

    Minimizes the squared mismatch between model and empirical values of
    E[Z^0.5] and E[Z^-0.5] over a log-spaced parameter grid; cheap because
    the model moments are closed-form.
    """
    emp_half = float(np.mean(np.sqrt(data.values)))
    emp_neg_half = float(np.mean(1.0 / np.sqrt(data.values)))
    grid = np.exp(np.linspace(math.log(0.1), math.log(10.0), 25))
    best, best_loss = RatioParams(1.0, 1.0), math.inf
    for a in grid:
        for b in grid:
            candidate = RatioParams(float(a), float(b))
            loss = (fractional_moment(candidate, 0.5) - emp_half) ** 2 + (
                fractional_moment(candidate, -0.5) - emp_neg_half
            ) ** 2
            if loss < best_loss:
                best, best_loss = candidate, loss
    return best


def fit_mle(data: SampleBatch, init: RatioParams | None = None) -> FitResult:
    """Maximize the log likelihood over (ln alpha, ln beta).

    With no explicit ``init`` the simplex runs from four starting points
    (three fixed, one moment-matched) and the best final value wins.
    Deterministic for fixed (data, init): the optimizer uses no randomness.
    """
    if len(data) < _MIN_FIT_SIZE:
        raise DataError(
            f"need at least {_MIN_FIT_SIZE} observations to fit, got {len(data)}"
        )

    def negative_ll(log_params: np.ndarray) -> float:
        candidate = RatioParams(math.exp(log_params[0]), math.exp(log_params[1]))
        return -log_likelihood(candidate, data)

    if init is not None:
        starts = [init]
    else:
        starts = [
            RatioParams(1.0, 1.0),
            RatioParams(0.5, 2.0),
            RatioParams(2.0, 0.5),
            _moment_matched_start(data),
        ]

    # the summed log likelihood carries rounding noise of order |LL|*1e-14,
    # so tolerances below that stall the simplex instead of tightening it
    options = NelderMeadOptions(max_iter=2000, xatol=1e-6, fatol=1e-8)
    best = None
    for start in starts:
        x0 = np.array([math.log(start.alpha), math.log(start.beta)])
        result = minimize_nelder_mead(negative_ll, x0, options)
        if best is None or result.fun < best.fun:
            best = result

    alpha_hat, beta_hat = math.exp(best.x[0]), math.exp(best.x[1])
    fitted = RatioParams(alpha_hat, beta_hat)
    curvature = hessian_standard_errors(fitted, data)
    return FitResult(
        alpha_hat=alpha_hat,
        beta_hat=beta_hat,
        log_likelihood=-best.fun,
        converged=best.converged,
        iterations=best.iterations,
        standard_errors=curvature.se,
    )


def hessian_standard_errors(
    params: RatioParams, data: SampleBatch, rel_step: float = 1e-4
) -> StdErrReport:
    """Asymptotic standard errors from the observed information.

    Builds the finite-difference Hessian of the log likelihood in the
    natural (alpha, beta) coordinates, inverts its negative, and reports
    the square roots of the diagonal. When the negative Hessian is not
    positive definite the point is not an interior maximum; ``se`` is then
    None and the note says why.
    """
    theta = np.array([params.alpha, params.beta])
    steps = rel_step * theta

    def ll_at(point: np.ndarray) -> float:
        return log_likelihood(RatioParams(point[0], point[1]), data)

    center = ll_at(theta)
    grad = np.empty(2)
    hess = np.empty((2, 2))
    for i in range(2):
        ei = np.zeros(2)
        ei[i] = steps[i]
        up, down = ll_at(theta + ei), ll_at(theta - ei)
        grad[i] = (up - down) / (2.0 * steps[i])
        hess[i, i] = (up - 2.0 * center + down) / steps[i] ** 2
    e0 = np.array([steps[0], 0.0])
    e1 = np.array([0.0, steps[1]])
    mixed = (
        ll_at(theta + e0 + e1)
        - ll_at(theta + e0 - e1)
        - ll_at(theta - e0 + e1)
        + ll_at(theta - e0 - e1)
    ) / (4.0 * steps[0] * steps[1])
    hess[0, 1] = hess[1, 0] = mixed

    gradient_norm = float(np.hypot(grad[0], grad[1]))
    neg = -hess
    det = neg[0, 0] * neg[1, 1] - neg[0, 1] * neg[1, 0]
    if neg[0, 0] <= 0.0 or det <= 0.0:
        return StdErrReport(
            se=None,
            gradient_norm=gradient_norm,
            hessian=hess,
            note="negative Hessian is not positive definite",
        )
    inv_diag = (neg[1, 1] / det, neg[0, 0] / det)
    return StdErrReport(
        se=(math.sqrt(inv_diag[0]), math.sqrt(inv_diag[1])),
        gradient_norm=gradient_norm,
        hessian=hess,
        note="ok",
    )


def _parse_positive(token: str, line_number: int) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise DataError(f"line {line_number}: cannot parse {token!r}") from exc
    if not value > 0 or not math.isfinite(value):
        raise DataError(f"line {line_number}: value must be positive, got {value!r}")
    return value


def read_samples(path: str, fmt: str = "plain", column: int = 0) -> SampleBatch:
    """Load a batch of positive observations from disk.

    ``plain`` expects one number per line (blank lines ignored); ``csv``
    reads the given zero-indexed column and skips a header row when the
    first row's selected cell is not numeric.
    """
    if fmt not in ("plain", "csv"):
        raise DomainError(f"unknown format {fmt!r}; use 'plain' or 'csv'")
    values: list[float] = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        if fmt == "plain":
            for line_number, line in enumerate(handle, start=1):
                token = line.strip()
                if not token:
                    continue
                values.append(_parse_positive(token, line_number))
        else:
            reader = csv.reader(handle)
            for line_number, row in enumerate(reader, start=1):
                if not row:
                    continue
                if column >= len(row):
                    raise DataError(
                        f"line {line_number}: no column {column} in row of "
                        f"{len(row)} cells"
                    )
                token = row[column].strip()
                if line_number == 1:
                    try:
                        float(token)
                    except ValueError:
                        continue  # header row
                values.append(_parse_positive(token, line_number))
    if not values:
        raise DataError(f"no observations found in {path!r}")
    return SampleBatch(values=np.array(values))
