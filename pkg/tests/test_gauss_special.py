"""Tests for the Gaussian special functions and the 1-D searches."""

import math

import mpmath
import numpy as np
import pytest

from wasserstein_tradeoffs.core import scalar_search
from wasserstein_tradeoffs.core.gauss_special import (
    mills_ratio,
    normal_cdf,
    normal_pdf,
    ramp_expectation,
    ramp_expectation_scalar,
    std_normal_cdf,
    std_normal_pdf,
)

mpmath.mp.dps = 40


def mp_ramp(a: float, delta: float) -> float:
    """Φ(−a) + ∫₀^δ (1 − t²/δ²) φ(t − a) dt in 40-digit arithmetic."""
    a, delta = mpmath.mpf(a), mpmath.mpf(delta)
    integral = mpmath.quad(lambda t: (1 - t * t / (delta * delta)) * mpmath.npdf(t - a), [0, delta])
    return float(mpmath.ncdf(-a) + integral)


class TestNormalCdf:

    def test_center_and_saturation(self):
        assert std_normal_cdf(0.0) == 0.5
        assert std_normal_cdf(-50.0) == 0.0
        assert std_normal_cdf(50.0) == 1.0

    @pytest.mark.parametrize("t", [-8.0, -5.5, -3.0, -1.0, 0.3, 1.0, 2.5, 4.9, 5.1, 7.0])
    def test_matches_extended_precision(self, t):
        assert abs(std_normal_cdf(t) - float(mpmath.ncdf(t))) <= 1e-12

    def test_deep_tail_keeps_relative_accuracy(self):
        ref = float(mpmath.ncdf(-20))
        assert std_normal_cdf(-20.0) == pytest.approx(ref, rel=1e-12)

    def test_symmetry(self):
        for t in np.linspace(-10, 10, 81):
            assert abs(std_normal_cdf(t) + std_normal_cdf(-t) - 1.0) <= 1e-14

    def test_derivative_is_density(self):
        h = 1e-5
        for t in np.linspace(-6, 6, 49):
            # upper half through φ(t) = φ(−t); differences of values near 1 carry no digits
            t = -abs(t)
            fd = (std_normal_cdf(t + h) - std_normal_cdf(t - h)) / (2 * h)
            assert fd == pytest.approx(std_normal_pdf(t), rel=1e-6)

    def test_monotone(self):
        grid = np.linspace(-45, 45, 2001)
        values = [std_normal_cdf(t) for t in grid]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_vectorized_agrees_with_scalar(self):
        grid = np.array([-60.0, -41.0, -6.0, -1.0, 0.0, 2.0, 6.0, 41.0])
        expected = [std_normal_cdf(t) for t in grid]
        np.testing.assert_allclose(normal_cdf(grid), expected, rtol=1e-13, atol=1e-300)


class TestNormalPdf:

    def test_values(self):
        assert std_normal_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-15)
        assert std_normal_pdf(2.0) == pytest.approx(float(mpmath.npdf(2)), rel=1e-14)
        assert std_normal_pdf(1.7) == std_normal_pdf(-1.7)

    def test_nonnegative(self):
        assert np.all(normal_pdf(np.linspace(-50, 50, 101)) >= 0.0)


class TestRampExpectation:

    @pytest.mark.parametrize("a,delta", [
        (1.0, 1.0), (-0.5, 0.2), (2.0, 3.0), (0.0, 0.01), (1.5, 0.05), (-2.0, 0.049),
        (0.5, 0.051), (3.0, 10.0), (-1.0, 45.0), (0.7, 100.0),
    ])
    def test_matches_quadrature(self, a, delta):
        ref = mp_ramp(a, delta)
        assert ramp_expectation_scalar(a, delta) == pytest.approx(ref, abs=1e-12)
        assert float(ramp_expectation(a, delta)[0]) == pytest.approx(ref, abs=1e-12)

    def test_branches_meet_at_series_cutoff(self):
        for a in (-1.0, 0.0, 1.0, 2.5):
            below = ramp_expectation_scalar(a, 0.05)
            above = ramp_expectation_scalar(a, 0.05 + 1e-12)
            assert abs(below - above) <= 1e-12

    def test_limits(self):
        # δ → 0 recovers the 0-1 loss, δ → ∞ the loss ceiling
        for a in (-1.0, 0.0, 1.0, 3.0):
            assert ramp_expectation_scalar(a, 1e-9) == pytest.approx(std_normal_cdf(-a), abs=1e-9)
            assert ramp_expectation_scalar(a, 1e7) == pytest.approx(1.0, abs=1e-10)

    def test_bounded_and_decreasing_in_margin(self):
        a_grid = np.linspace(-4, 8, 121)
        for delta in (0.01, 0.3, 1.0, 5.0, 60.0):
            values = ramp_expectation(a_grid, delta)
            assert np.all((values >= 0.0) & (values <= 1.0))
            assert np.all(np.diff(values) <= 1e-15)

    @pytest.mark.parametrize("a,delta", [
        (8.0, math.sqrt(0.004)), (7.5, 0.06), (12.0, 0.3), (6.0, 1.0), (30.0, 2.0),
    ])
    def test_upper_tail_keeps_relative_accuracy(self, a, delta):
        ref = mp_ramp(a, delta)
        assert ramp_expectation_scalar(a, delta) == pytest.approx(ref, rel=1e-8)
        assert float(ramp_expectation(a, delta)[0]) == pytest.approx(ref, rel=1e-8)

    def test_strictly_decreasing_past_the_ramp(self):
        delta = math.sqrt(2.0 / (0.5 * 1000.0))
        a_grid = np.linspace(7.4, 8.0, 31)
        values = ramp_expectation(a_grid, delta)
        assert np.all(values > 0.0)
        assert np.all(np.diff(values) < 0.0)
        scalar = [ramp_expectation_scalar(a, delta) for a in a_grid]
        np.testing.assert_allclose(scalar, values, rtol=1e-12)

    def test_mills_ratio(self):
        for t in (0.0, 1.0, 5.0, 20.0):
            ref = mpmath.ncdf(-t) / mpmath.npdf(t)
            assert float(mills_ratio(t)) == pytest.approx(float(ref), rel=1e-13)

    def test_broadcasting(self):
        a = np.array([0.0, 1.0, 2.0])
        out = ramp_expectation(a, np.array([0.5]))
        assert out.shape == (3,)
        assert out[1] == pytest.approx(ramp_expectation_scalar(1.0, 0.5), abs=1e-14)


class TestScalarSearch:

    def test_golden_section_quadratic(self):
        x, fx, n = scalar_search.golden_section(lambda x: (x - 1.3) ** 2 + 2.0, -5.0, 5.0, 1e-10)
        assert x == pytest.approx(1.3, abs=1e-9)
        assert fx == pytest.approx(2.0, abs=1e-15)
        assert n > 10

    def test_log_scale_widens_bracket(self):
        found = scalar_search.minimize_log_scale(lambda x: (math.log(x) - math.log(5e9)) ** 2,
                                                 1e-2, 1e2, 1e-10, max_expansions=12)
        assert not found.hit_boundary
        assert found.x == pytest.approx(5e9, rel=1e-6)
        assert found.hi > 1e2

    def test_log_scale_reports_boundary(self):
        found = scalar_search.minimize_log_scale(lambda x: -math.log(x), 1.0, 10.0, 1e-8, max_expansions=1)
        assert found.hit_boundary

    def test_sign_changes_and_refinement(self):
        g = lambda x: (x - 0.5) * (x - 2.0)
        brackets = scalar_search.find_sign_changes(g, np.linspace(0.0, 3.0, 31))
        assert len(brackets) == 2
        roots = [scalar_search.refine_root(g, lo, hi, xtol=1e-14) for lo, hi in brackets]
        assert roots[0] == pytest.approx(0.5, abs=1e-12)
        assert roots[1] == pytest.approx(2.0, abs=1e-12)
