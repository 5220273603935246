"""Closed-form MSE and CRB expressions: frozen values, dense-trace oracles,
and shape properties."""

import numpy as np
import pytest

from oracles import dense_convolution_matrix, dense_correlator
from pnchanest import (
    EstimatorMethod,
    TU6,
    crb,
    crb_full,
    crb_truncated,
    dense_correlation_matrix,
    error_floor_snr_db,
    mse_correlation,
    mse_full_inverse,
    mse_interference_subtraction,
    mse_truncated_inverse,
    predicted_mse,
    quantize_profile,
)


class TestFrozenValues:
    def test_correlation_floor(self):
        assert mse_correlation(255, 0.0) == pytest.approx(254 / 255**3, rel=1e-15)
        assert mse_correlation(255, 0.0) == pytest.approx(1.532e-5, rel=1e-3)

    def test_correlation_noise_dominated_gap(self):
        # the relative gap between the MSE and its noise term is exactly
        # (n-1)/(n**2 sigma_w2), about 3.9% at sigma_w2 = 0.1
        n, sigma = 255, 0.1
        gap = (mse_correlation(n, sigma) - sigma / n) / (sigma / n)
        assert gap == pytest.approx((n - 1) / (n**2 * sigma), rel=1e-12)
        assert gap < 0.04

    def test_correlation_decreases_with_length(self):
        values = [mse_correlation(n, 0.01) for n in (10, 1000, 100_000)]
        assert values[0] > values[1] > values[2]

    def test_full_inverse_values(self):
        assert mse_full_inverse(255, 0.0) == 0.0
        assert mse_full_inverse(255, 0.01) == pytest.approx(2 * 0.01 / 256, rel=1e-15)
        assert mse_full_inverse(255, 0.01) == pytest.approx(7.8125e-5, rel=1e-12)

    def test_full_inverse_is_twice_the_crb(self):
        for n in (7, 255, 511):
            for sigma in (1e-4, 0.01, 1.0):
                assert mse_full_inverse(n, sigma) / crb_full(n, sigma) == 2.0

    def test_truncated_inverse_value(self):
        # denominator (n+1)(n+1-l) = 55808 for n=255, l=38
        assert mse_truncated_inverse(255, 38, 0.01) == pytest.approx(
            219 * 0.01 / 55808, rel=1e-14)

    def test_truncated_inverse_equals_crb(self):
        for n, l in ((255, 38), (255, 130), (511, 130)):
            for sigma in (1e-3, 0.1):
                assert mse_truncated_inverse(n, l, sigma) == crb_truncated(n, l, sigma)

    def test_truncated_full_length_collapse(self):
        assert mse_truncated_inverse(255, 255, 0.02) == mse_full_inverse(255, 0.02)

    def test_interference_subtraction_single_tap(self):
        # l = 1 leaves only the plain correlation noise term
        assert mse_interference_subtraction(255, 1, 0.04) == pytest.approx(
            0.04 / 255, rel=1e-14)
        assert mse_interference_subtraction(255, 1, 0.0) == 0.0

    def test_interference_subtraction_floors(self):
        assert mse_interference_subtraction(255, 38, 0.0) == pytest.approx(
            37 * 1333 / (255**4 * 38), rel=1e-14)
        assert mse_interference_subtraction(511, 130, 0.0) == pytest.approx(
            129 * 16513 / (511**4 * 130), rel=1e-14)
        assert mse_interference_subtraction(511, 130, 0.0) == pytest.approx(
            2.403e-7, rel=1e-3)

    def test_interference_floor_ratio_near_length_ratio_squared(self):
        ratio = (mse_interference_subtraction(255, 38, 0.0)
                 / mse_correlation(255, 0.0))
        assert 0.5 * (38 / 255) ** 2 <= ratio <= 2.0 * (38 / 255) ** 2

    def test_crb_values(self):
        assert crb_full(255, 0.01) == pytest.approx(3.90625e-5, rel=1e-12)
        assert crb_full(255, 0.0) == 0.0
        assert crb_truncated(511, 130, 0.01) == pytest.approx(
            383 * 0.01 / 195584, rel=1e-14)

    def test_error_floor_thresholds(self):
        assert round(error_floor_snr_db(255), 1) == 24.1
        assert round(error_floor_snr_db(511), 1) == 27.1
        assert error_floor_snr_db(2) == pytest.approx(10 * np.log10(4), rel=1e-12)


class TestTraceOracles:
    """Each closed form re-derived from dense matrix traces."""

    def test_correlation_mse(self, seq255):
        n, sigma = seq255.n, 0.02
        positions, powers, _ = quantize_profile(TU6)
        lam = np.zeros(n)
        lam[positions] = powers
        q = dense_correlation_matrix(n)
        c = dense_correlator(seq255.symbols)
        interference = np.trace((q - np.eye(n)) @ np.diag(lam)
                                @ (q - np.eye(n)).T) / n
        noise = sigma * np.trace(c @ c.conj().T).real / n**3
        assert mse_correlation(n, sigma) == pytest.approx(
            interference + noise, rel=1e-10)

    def test_full_inverse_mse(self):
        n, sigma = 255, 0.02
        q_inv = np.linalg.inv(dense_correlation_matrix(n))
        assert mse_full_inverse(n, sigma) == pytest.approx(
            sigma / n**2 * np.trace(q_inv), rel=1e-10)

    def test_truncated_inverse_mse(self):
        n, l, sigma = 255, 38, 0.02
        block = dense_correlation_matrix(n)[:l, :l]
        value = sigma / (l * n) * np.trace(np.linalg.inv(block))
        assert mse_truncated_inverse(n, l, sigma) == pytest.approx(value, rel=1e-10)

    def test_truncated_crb_from_gram_matrix(self, seq255):
        n, l, sigma = seq255.n, 38, 0.02
        p_block = dense_convolution_matrix(seq255.symbols)[:, :l]
        gram = p_block.conj().T @ p_block
        value = sigma / l * np.trace(np.linalg.inv(gram)).real
        assert crb_truncated(n, l, sigma) == pytest.approx(value, rel=1e-10)

    def test_interference_subtraction_mse(self):
        n, l, sigma = 255, 38, 0.02
        positions, powers, _ = quantize_profile(TU6)
        lam = np.zeros(l)
        lam[positions] = powers
        q_block = dense_correlation_matrix(n)[:l, :l]
        delta = q_block - np.diag(np.diag(q_block))
        dd = delta @ delta
        interference = np.trace(dd @ np.diag(lam) @ dd.T)
        noise = sigma / n * np.trace(
            q_block + delta @ q_block @ delta.T - 2 * q_block @ delta.T)
        assert mse_interference_subtraction(n, l, sigma) == pytest.approx(
            (interference + noise) / l, rel=1e-10)


class TestProperties:
    @pytest.mark.parametrize("n,l", [(255, 38), (255, 130), (511, 130), (63, 9)])
    def test_ordering(self, n, l):
        for sigma in (1e-4, 1e-2, 1.0):
            assert crb_full(n, sigma) < crb_truncated(n, l, sigma)
            assert crb_truncated(n, l, sigma) <= mse_full_inverse(n, sigma)
            assert mse_truncated_inverse(n, l, sigma) < mse_full_inverse(n, sigma)

    def test_floor_behavior(self):
        for n, l in ((255, 38), (255, 130), (511, 38), (511, 130)):
            assert mse_correlation(n, 0.0) == (n - 1) / n**3 > 0
            assert mse_full_inverse(n, 0.0) == 0.0
            assert mse_truncated_inverse(n, l, 0.0) == 0.0
            floor = mse_interference_subtraction(n, l, 0.0)
            assert 0 < floor <= mse_correlation(n, 0.0) * (l / n) ** 2 * 2

    def test_monotone_in_noise(self):
        grid = np.logspace(-6, 1, 30)
        for formula in (
                lambda s: mse_correlation(255, s),
                lambda s: mse_full_inverse(255, s),
                lambda s: mse_truncated_inverse(255, 38, s),
                lambda s: mse_interference_subtraction(255, 38, s),
                lambda s: crb_full(255, s),
                lambda s: crb_truncated(255, 38, s)):
            values = [formula(s) for s in grid]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            mse_correlation(1, 0.1)
        with pytest.raises(ValueError):
            mse_correlation(255, -0.1)
        with pytest.raises(ValueError):
            mse_truncated_inverse(255, 0, 0.1)
        with pytest.raises(ValueError):
            mse_truncated_inverse(255, 256, 0.1)
        with pytest.raises(ValueError):
            predicted_mse("inverse-truncated", 255, 0.1)


class TestDispatch:
    def test_predicted_mse(self):
        assert predicted_mse("correlation", 255, 0.01) == mse_correlation(255, 0.01)
        assert predicted_mse(EstimatorMethod.INVERSE_FULL, 255, 0.01) == \
            mse_full_inverse(255, 0.01)
        assert predicted_mse("inverse-truncated", 255, 0.01, 38) == \
            mse_truncated_inverse(255, 38, 0.01)
        assert predicted_mse("subtract-interference", 255, 0.01, 38) == \
            mse_interference_subtraction(255, 38, 0.01)

    def test_crb_dispatch(self):
        assert crb("correlation", 255, 0.01) == crb_full(255, 0.01)
        assert crb("inverse-full", 255, 0.01) == crb_full(255, 0.01)
        assert crb("inverse-truncated", 255, 0.01, 38) == crb_truncated(255, 38, 0.01)
        assert crb("subtract-interference", 255, 0.01, 38) == \
            crb_truncated(255, 38, 0.01)
