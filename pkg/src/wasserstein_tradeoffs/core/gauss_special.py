"""Standard normal special functions and the truncated-Gaussian ramp expectation.

Scalar entry points use ``math`` for speed inside 1-D searches; the array
variants go through ``scipy.special`` and broadcast.
"""

import logging
import math
from typing import Union

import numpy as np
from numpy.polynomial import hermite_e
from scipy import special

from wasserstein_tradeoffs.config import Config

log = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)


def std_normal_cdf(t: float) -> float:
    """Standard normal c.d.f. Φ(t).

    Saturates to exactly 0/1 outside |t| > 40 and uses the complementary
    error function in the tails.
    """
    t = float(t)
    if t > Config.NORMAL_SATURATION:
        return 1.0
    if t < -Config.NORMAL_SATURATION:
        return 0.0
    if t < -Config.ERFC_BRANCH:
        return 0.5 * math.erfc(-t / _SQRT2)
    if t > Config.ERFC_BRANCH:
        return 1.0 - 0.5 * math.erfc(t / _SQRT2)
    return 0.5 * (1.0 + math.erf(t / _SQRT2))


def std_normal_pdf(t: float) -> float:
    """Standard normal density φ(t)."""
    t = float(t)
    return _INV_SQRT_2PI * math.exp(-0.5 * t * t)


def normal_cdf(t: ArrayLike) -> np.ndarray:
    """Vectorized Φ with the same saturation as :func:`std_normal_cdf`."""
    t = np.asarray(t, dtype=float)
    out = special.ndtr(t)
    out = np.where(t > Config.NORMAL_SATURATION, 1.0, out)
    return np.where(t < -Config.NORMAL_SATURATION, 0.0, out)


def normal_pdf(t: ArrayLike) -> np.ndarray:
    """Vectorized φ."""
    t = np.asarray(t, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * t * t)


def mills_ratio(t: ArrayLike) -> np.ndarray:
    """Upper-tail Mills ratio Φ(−t)/φ(t), through the scaled erfc so it stays finite for large t."""
    t = np.asarray(t, dtype=float)
    return _SQRT_HALF_PI * special.erfcx(t / _SQRT2)


def _upper_tail_ramp(a, delta, pdf, mills):
    """Closed form rewritten on φ(a − δ) and φ(a) times Mills ratios, for a > δ.

    Here Φ(a − δ) and Φ(a) are both near 1 and their difference carries no digits;
    in this form the absolute error scales with φ(a − δ) instead.
    """
    s = a - delta
    r_s, r_a = mills(s), mills(a)
    d2 = delta * delta
    return (pdf(s) * (r_s + ((a + delta) - (a * a + 1.0) * r_s) / d2)
            + pdf(a) * ((a * a + 1.0) * r_a - a) / d2)


def _series_coefficients(delta: np.ndarray) -> np.ndarray:
    """Hermite-series coefficients of ∫₀^δ (1 − t²/δ²) φ(t − a) dt / φ(a).

    Column j holds the coefficients for delta[j].
    """
    k = np.arange(Config.SERIES_TERMS, dtype=float)
    base = 2.0 / (special.factorial(k) * (k + 1.0) * (k + 3.0))
    return base[:, None] * np.power(delta[None, :], (k + 1.0)[:, None])


def ramp_expectation(a: ArrayLike, delta: ArrayLike) -> np.ndarray:
    """E[ramp(ν)] for ν ~ N(0, 1), where the ramp loss is

        1                      if ν ≤ −a
        1 − (ν + a)² / δ²      if −a < ν < δ − a
        0                      otherwise.

    Equal to Φ(−a) + ∫₀^δ (1 − t²/δ²) φ(t − a) dt. Four evaluation branches:
    a Hermite series for small δ (the closed form cancels catastrophically
    there), a Mills-ratio form in the upper tail a > δ, the closed form, and
    a saturated form once δ − a > 40.

    Args:
        a: Normalized margin(s)
        delta: Ramp width(s), δ > 0

    Returns:
        Array broadcast from ``a`` and ``delta``, clipped to [0, 1]
    """
    a, delta = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(delta, dtype=float))
    a = a.ravel()
    delta = delta.ravel()
    out = np.empty_like(a)

    small = delta <= Config.SERIES_DELTA_MAX
    saturated = ~small & (delta - a > Config.NORMAL_SATURATION)
    tail = ~small & (a > delta)
    closed = ~small & ~saturated & ~tail

    if np.any(small):
        a_s, d_s = a[small], delta[small]
        coef = _series_coefficients(d_s)
        integral = normal_pdf(a_s) * hermite_e.hermeval(a_s, coef, tensor=False)
        out[small] = normal_cdf(-a_s) + integral

    if np.any(closed):
        a_c, d_c = a[closed], delta[closed]
        bracket = (
            (a_c + d_c) * normal_pdf(a_c - d_c)
            - a_c * normal_pdf(a_c)
            + (a_c * a_c + 1.0) * (normal_cdf(a_c - d_c) - normal_cdf(a_c))
        )
        out[closed] = normal_cdf(d_c - a_c) + bracket / (d_c * d_c)

    if np.any(tail):
        out[tail] = _upper_tail_ramp(a[tail], delta[tail], normal_pdf, mills_ratio)

    if np.any(saturated):
        # Φ(δ − a) = 1, Φ(a − δ) = φ(a − δ) = 0
        a_t, d_t = a[saturated], delta[saturated]
        out[saturated] = 1.0 - (a_t * normal_pdf(a_t) + (a_t * a_t + 1.0) * normal_cdf(a_t)) / (d_t * d_t)

    return np.clip(out, 0.0, 1.0)


def ramp_expectation_scalar(a: float, delta: float) -> float:
    """Scalar :func:`ramp_expectation` on ``math`` functions, for inner searches.

    The Hermite series uses the recurrence He_{k+1}(a) = a·He_k(a) − k·He_{k−1}(a).
    """
    a = float(a)
    if delta <= Config.SERIES_DELTA_MAX:
        he_prev, he = 0.0, 1.0
        term_scale = delta  # δ^{k+1}/k!
        total = 0.0
        for k in range(Config.SERIES_TERMS):
            total += he * 2.0 * term_scale / ((k + 1.0) * (k + 3.0))
            he_prev, he = he, a * he - k * he_prev
            term_scale *= delta / (k + 1.0)
        value = std_normal_cdf(-a) + std_normal_pdf(a) * total
    elif delta - a > Config.NORMAL_SATURATION:
        value = 1.0 - (a * std_normal_pdf(a) + (a * a + 1.0) * std_normal_cdf(a)) / (delta * delta)
    elif a > delta:
        value = _upper_tail_ramp(a, delta, std_normal_pdf, lambda t: float(mills_ratio(t)))
    else:
        bracket = (
            (a + delta) * std_normal_pdf(a - delta)
            - a * std_normal_pdf(a)
            + (a * a + 1.0) * (std_normal_cdf(a - delta) - std_normal_cdf(a))
        )
        value = std_normal_cdf(delta - a) + bracket / (delta * delta)
    return min(max(value, 0.0), 1.0)
