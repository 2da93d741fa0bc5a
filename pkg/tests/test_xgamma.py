"""Tests for the base xgamma distribution."""

import math

import numpy as np
import pytest

from xgratio.errors import DomainError
from xgratio.numerics import RandomState, integrate_semi_infinite
from xgratio.xgamma import XGammaParams, cdf, mean, pdf, sample, sample_many


class TestParams:
    def test_positive_theta_required(self):
        with pytest.raises(DomainError):
            XGammaParams(0.0)
        with pytest.raises(DomainError):
            XGammaParams(-1.5)

    def test_mixture_weight(self):
        assert XGammaParams(1.0).exponential_weight == pytest.approx(0.5)
        assert XGammaParams(3.0).exponential_weight == pytest.approx(0.75)


class TestPdf:
    def test_value_at_origin(self):
        assert pdf(XGammaParams(1.0), 0.0) == pytest.approx(0.5, rel=1e-14)
        assert pdf(XGammaParams(2.0), 0.0) == pytest.approx(4.0 / 3.0, rel=1e-14)

    def test_normalization(self):
        params = XGammaParams(0.7)
        total = integrate_semi_infinite(lambda t: pdf(params, t))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_negative_argument(self):
        with pytest.raises(DomainError):
            pdf(XGammaParams(1.0), -0.1)

    def test_mixture_identity_pointwise(self):
        # exponential(theta) and gamma(3, theta) components recombine into
        # the density exactly
        for theta in [0.5, 1.0, 2.0, 5.0]:
            params = XGammaParams(theta)
            w = params.exponential_weight
            for t in np.linspace(0.0, 10.0, 101):
                exp_part = w * theta * math.exp(-theta * t)
                gamma_part = (1.0 - w) * (theta**3 * t**2 / 2.0) * math.exp(-theta * t)
                assert exp_part + gamma_part == pytest.approx(
                    pdf(params, float(t)), abs=1e-14, rel=1e-13
                )

    def test_vectorized(self):
        params = XGammaParams(1.3)
        ts = np.linspace(0, 5, 7)
        values = pdf(params, ts)
        assert values.shape == ts.shape
        assert values[0] == pdf(params, 0.0)


class TestCdf:
    def test_at_zero(self):
        assert cdf(XGammaParams(1.0), 0.0) == 0.0

    def test_limit_at_infinity(self):
        assert cdf(XGammaParams(1.0), 200.0) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_value(self):
        # direct substitution at theta=1, t=2, cross-checked by quadrature
        params = XGammaParams(1.0)
        expected = 1.0 - 3.0 * math.exp(-2.0)
        assert cdf(params, 2.0) == pytest.approx(expected, rel=1e-14)
        from xgratio.numerics import integrate_finite

        by_quadrature = integrate_finite(lambda t: pdf(params, t), 0.0, 2.0)
        assert cdf(params, 2.0) == pytest.approx(by_quadrature, abs=1e-10)

    def test_monotone(self):
        params = XGammaParams(0.9)
        ts = np.linspace(0.0, 20.0, 400)
        values = cdf(params, ts)
        assert np.all(np.diff(values) >= 0.0)

    def test_matches_pdf_derivative(self):
        h = 1e-5
        for theta in [0.5, 1.0, 2.0, 5.0]:
            params = XGammaParams(theta)
            for t in np.linspace(0.1, 10.0, 67):
                slope = (cdf(params, t + h) - cdf(params, t - h)) / (2.0 * h)
                assert slope == pytest.approx(pdf(params, float(t)), abs=1e-6)

    def test_negative_argument(self):
        with pytest.raises(DomainError):
            cdf(XGammaParams(1.0), -2.0)


class TestMean:
    def test_closed_form_against_quadrature(self):
        for theta, expected in [(1.0, 2.0), (3.0, 0.5)]:
            params = XGammaParams(theta)
            by_quadrature = integrate_semi_infinite(lambda t: t * pdf(params, t))
            assert mean(params) == pytest.approx(expected, rel=1e-12)
            assert mean(params) == pytest.approx(by_quadrature, rel=1e-9)

    def test_large_theta_asymptote(self):
        theta = 1000.0
        assert mean(XGammaParams(theta)) == pytest.approx(1.0 / theta, rel=0.01)


class TestSampler:
    def test_reproducible(self):
        params = XGammaParams(0.8)
        a = sample_many(params, 500, RandomState(123))
        b = sample_many(params, 500, RandomState(123))
        assert np.array_equal(a, b)

    def test_all_positive(self):
        draws = sample_many(XGammaParams(2.0), 10_000, RandomState(42))
        assert np.all(draws > 0)

    def test_scalar_draw(self):
        value = sample(XGammaParams(1.0), RandomState(7))
        assert value > 0

    def test_empirical_mean(self):
        params = XGammaParams(1.0)
        draws = sample_many(params, 100_000, RandomState(2718))
        # Var(T) = E[T^2] - mean^2 = 7 - 4 = 3 at theta = 1
        tolerance = 3.0 * math.sqrt(3.0 / 100_000)
        assert abs(draws.mean() - mean(params)) < tolerance

    def test_kolmogorov_smirnov_against_cdf(self):
        params = XGammaParams(0.8)
        n = 100_000
        draws = np.sort(sample_many(params, n, RandomState(314159)))
        model = cdf(params, draws)
        positions = np.arange(1, n + 1) / n
        ks = max(
            float(np.max(np.abs(positions - model))),
            float(np.max(np.abs(positions - 1.0 / n - model))),
        )
        assert ks < 0.01

    def test_mixture_branch_fraction(self):
        params = XGammaParams(1.0)
        n = 100_000
        _, branch = sample_many(params, n, RandomState(55), return_branch=True)
        fraction = branch.mean()
        assert abs(fraction - 0.5) < 3.0 * 0.5 / math.sqrt(n)

    def test_fractional_moment_against_quadrature(self):
        params = XGammaParams(1.0)
        draws = sample_many(params, 200_000, RandomState(777))
        empirical = np.sqrt(draws)
        target = integrate_semi_infinite(lambda t: np.sqrt(t) * pdf(params, t))
        stderr = empirical.std(ddof=1) / math.sqrt(empirical.size)
        assert abs(empirical.mean() - target) < 3.0 * stderr

    def test_count_validation(self):
        with pytest.raises(DomainError):
            sample_many(XGammaParams(1.0), 0, RandomState(0))
