"""Shared helpers for the test suite."""

import numpy as np


def ks_distance(draws: np.ndarray, model_cdf_values: np.ndarray) -> float:
    """Supremum distance between the empirical cdf of ``draws`` and the model
    cdf evaluated at the (sorted) draws."""
    order = np.argsort(draws)
    model = np.asarray(model_cdf_values)[order]
    n = draws.size
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return max(
        float(np.max(np.abs(upper - model))),
        float(np.max(np.abs(lower - model))),
    )
