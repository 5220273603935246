"""Closed-form MSE predictions, Cramer-Rao bounds, and the error-floor onset.

Conventions: ``n`` is the sequence length, ``l`` the known channel length,
``sigma_w2`` the per-sample complex noise variance.  With unit-power +/-1
symbols and unit-power channels, SNR(dB) = -10*log10(sigma_w2).

Normalization: full-length predictions (``correlation``, ``inverse-full``)
average the squared error over all N positions; truncated predictions average
over the L estimated positions.  Empirical MSEs must use the same convention
or the curves are offset by N/L.
"""

import math

from .estimators import EstimatorMethod


def mse_correlation(n, sigma_w2) -> float:
    """Raw correlation estimator MSE: ``sigma_w2/n + (n-1)/n**3``.

    The second term is the interference floor; it does not decay with SNR.
    """
    n, sigma_w2 = _check(n, sigma_w2)
    return sigma_w2 / n + (n - 1.0) / n**3


def mse_full_inverse(n, sigma_w2) -> float:
    """Full-inverse estimator MSE: ``2*sigma_w2/(n+1)``, floor-free at twice
    the full-length CRB."""
    n, sigma_w2 = _check(n, sigma_w2)
    return 2.0 * sigma_w2 / (n + 1.0)


def mse_truncated_inverse(n, l, sigma_w2) -> float:
    """Truncated-inverse estimator MSE:
    ``(n-l+2)*sigma_w2 / (n**2 + 2n - nl - l + 1)``.

    Coincides with :func:`crb_truncated`; at ``l == n`` it reduces to
    :func:`mse_full_inverse`.
    """
    n, sigma_w2 = _check(n, sigma_w2)
    l = _check_l(n, l)
    return (n - l + 2.0) * sigma_w2 / (n * n + 2.0 * n - n * l - l + 1.0)


def mse_interference_subtraction(n, l, sigma_w2) -> float:
    """Interference-subtraction estimator MSE:
    ``(n**3 + (l-1)(2-l-n))/n**4 * sigma_w2 + (l-1)(l**2-3l+3)/(n**4 l)``.

    The residual floor (second term) is roughly ``(l/n)**2`` times the raw
    correlation floor.
    """
    n, sigma_w2 = _check(n, sigma_w2)
    l = _check_l(n, l)
    noise = (n**3 + (l - 1.0) * (2.0 - l - n)) / n**4 * sigma_w2
    floor = (l - 1.0) * (l * l - 3.0 * l + 3.0) / (n**4 * l)
    return noise + floor


def crb_full(n, sigma_w2) -> float:
    """Cramer-Rao bound for full-length (N-tap) estimation: ``sigma_w2/(n+1)``."""
    n, sigma_w2 = _check(n, sigma_w2)
    return sigma_w2 / (n + 1.0)


def crb_truncated(n, l, sigma_w2) -> float:
    """Cramer-Rao bound when the channel length l is known:
    ``(n-l+2)*sigma_w2 / (n**2 + 2n - nl - l + 1)``."""
    n, sigma_w2 = _check(n, sigma_w2)
    l = _check_l(n, l)
    return (n - l + 2.0) * sigma_w2 / (n * n + 2.0 * n - n * l - l + 1.0)


def error_floor_snr_db(n) -> float:
    """SNR above which the correlation estimator's floor dominates its noise
    term: ``10*log10(n**2/(n-1))`` (24.1 dB for n=255, 27.1 dB for n=511)."""
    n, _ = _check(n, 0.0)
    return 10.0 * math.log10(n * n / (n - 1.0))


def predicted_mse(method, n, sigma_w2, channel_length=None) -> float:
    """Dispatch the closed-form MSE for an estimator method."""
    method = EstimatorMethod(method)
    if method is EstimatorMethod.CORRELATION:
        return mse_correlation(n, sigma_w2)
    if method is EstimatorMethod.INVERSE_FULL:
        return mse_full_inverse(n, sigma_w2)
    if method is EstimatorMethod.INVERSE_TRUNCATED:
        return mse_truncated_inverse(n, channel_length, sigma_w2)
    return mse_interference_subtraction(n, channel_length, sigma_w2)


def crb(method, n, sigma_w2, channel_length=None) -> float:
    """The Cramer-Rao bound matching an estimator's length convention."""
    method = EstimatorMethod(method)
    if method in (EstimatorMethod.CORRELATION, EstimatorMethod.INVERSE_FULL):
        return crb_full(n, sigma_w2)
    return crb_truncated(n, channel_length, sigma_w2)


def _check(n, sigma_w2):
    n = int(n)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    sigma_w2 = float(sigma_w2)
    if sigma_w2 < 0:
        raise ValueError(f"sigma_w2 must be >= 0, got {sigma_w2}")
    return n, sigma_w2


def _check_l(n, l):
    if l is None:
        raise ValueError("channel length is required for truncated predictions")
    l = int(l)
    if not 1 <= l <= n:
        raise ValueError(f"channel length must be in [1, {n}], got {l}")
    return l
