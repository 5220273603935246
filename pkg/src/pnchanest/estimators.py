"""Channel impulse response estimators built on PN circular correlation.

Four estimators are provided, all sharing the same front end: the raw
correlation estimate, obtained by circularly cross-correlating the received
block with the known sequence (a direct quadratic-cost operation).  Because
the sequence autocorrelation is -1/N rather than 0 at nonzero lags, the raw
estimate carries mutual interference between channel taps, which shows up as
an SNR-independent error floor.  The refinements remove or reduce it:

``correlation``
    The raw N-tap correlation estimate.
``inverse-full``
    Left-multiplies by the inverse autocorrelation matrix, removing the
    interference exactly at the price of a 2x noise boost over the CRB.
    Algebraically this is the full least-squares solution.
``inverse-truncated``
    Truncates to a known channel length L, then applies the inverse of the
    truncated autocorrelation matrix.  Unbiased and achieves the CRB.
``subtract-interference``
    Truncates to L and subtracts the estimated interference once, an O(L)
    correction that lowers the floor by roughly (L/N)**2.

Every refinement uses the two-valued structure of the matrices involved, so
it costs O(N) or O(L) on top of the shared correlation stage.  The estimator
classes follow the scikit-learn fit/transform protocol: ``fit`` binds the
reference sequence and precomputes the operators, ``transform`` maps one
received vector or a block of them to estimates.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .structured import (
    correlation_inverse,
    interference_subtractor,
    truncated_correlation_inverse,
)
from .validation import as_complex_block, as_pn_symbols, check_channel_length


class EstimatorMethod(str, Enum):
    """Identifiers used in reports and on the command line."""

    CORRELATION = "correlation"
    INVERSE_FULL = "inverse-full"
    INVERSE_TRUNCATED = "inverse-truncated"
    SUBTRACT_INTERFERENCE = "subtract-interference"


#: Methods whose estimate has length L (assumed channel length) instead of N.
TRUNCATED_METHODS = frozenset(
    {EstimatorMethod.INVERSE_TRUNCATED, EstimatorMethod.SUBTRACT_INTERFERENCE})


@dataclass(frozen=True, eq=False)
class CirEstimate:
    """An estimated channel impulse response with its provenance."""

    taps: np.ndarray
    method: EstimatorMethod
    assumed_length: int | None = None


def correlation_operator(sequence) -> np.ndarray:
    """The ``(N, N)`` operator that maps a received row vector to its raw
    correlation estimate via right-multiplication.

    Entry ``(j, i)`` is ``conj(p[(j - i) % N]) / N``, so ``d @ op`` evaluates
    ``(1/N) sum_m conj(p[m]) d[(m + i) % N]`` for every lag ``i`` at the full
    quadratic cost.  Conjugation is kept for generality; it is a no-op on the
    real +/-1 sequences shipped here.
    """
    symbols = as_pn_symbols(sequence)
    n = symbols.size
    idx = (np.arange(n)[:, np.newaxis] - np.arange(n)[np.newaxis, :]) % n
    return np.conj(symbols[idx]).astype(np.complex128) / n


def correlation_estimate(received, sequence, ops=None):
    """Raw correlation estimate of the CIR, one row per received block.

    A single length-N vector in gives a single length-N estimate out.  If
    ``ops`` is given it is charged the direct cost, ``N * (2N - 1)`` scalar
    operations per block.
    """
    symbols = as_pn_symbols(sequence)
    block, was_1d = as_complex_block(received, symbols.size, name="received")
    if ops is not None:
        n = symbols.size
        ops.add(block.shape[0] * n * (2 * n - 1))
    out = block @ correlation_operator(symbols)
    return out[0] if was_1d else out


def refine_full_inverse(hbar, ops=None):
    """Apply the inverse autocorrelation matrix to raw estimates, O(N) each."""
    hbar = np.asarray(hbar, dtype=np.complex128)
    return correlation_inverse(hbar.shape[-1]).apply(hbar, ops=ops)


def refine_truncated_inverse(hbar, channel_length, ops=None):
    """Truncate raw estimates to ``channel_length`` and apply the truncated
    inverse, O(L) each."""
    hbar = np.asarray(hbar, dtype=np.complex128)
    n = hbar.shape[-1]
    l = check_channel_length(channel_length, n)
    return truncated_correlation_inverse(n, l).apply(hbar[..., :l], ops=ops)


def refine_subtract_interference(hbar, channel_length, ops=None):
    """Truncate raw estimates to ``channel_length`` and subtract the
    first-order tap interference, O(L) each: entry i becomes
    ``h[i] + (sum(h) - h[i]) / N``."""
    hbar = np.asarray(hbar, dtype=np.complex128)
    n = hbar.shape[-1]
    l = check_channel_length(channel_length, n)
    return interference_subtractor(n, l).apply(hbar[..., :l], ops=ops)


class _PnEstimatorBase(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing for the PN channel estimators."""

    def __init__(self, sequence=None):
        self.sequence = sequence

    def fit(self, X=None, y=None):
        """Bind the reference sequence and precompute operators.

        ``X`` and ``y`` are accepted for pipeline compatibility and ignored;
        the estimator is fully determined by its parameters.
        """
        symbols = as_pn_symbols(self.sequence)
        self.symbols_ = symbols
        self.n_ = symbols.size
        self.correlation_operator_ = correlation_operator(symbols)
        self._fit_refinement()
        return self

    def transform(self, X):
        """Estimate the CIR for each received block in ``X``.

        Parameters
        ----------
        X : array-like, shape (n_blocks, N) or (N,), complex
            Received PN blocks.

        Returns
        -------
        ndarray, shape (n_blocks, M) or (M,)
            Estimates; ``M`` is N for full-length methods and the assumed
            channel length for truncated ones.
        """
        self._check_fitted()
        block, was_1d = as_complex_block(X, self.n_, name="X")
        out = self.refine(block @ self.correlation_operator_)
        return out[0] if was_1d else out

    def refine(self, hbar):
        """Apply only this estimator's refinement stage to precomputed raw
        correlation estimates (shape ``(..., N)``)."""
        self._check_fitted()
        return self._refine(hbar)

    def _fit_refinement(self):
        pass

    def _refine(self, hbar):
        raise NotImplementedError

    def _check_fitted(self):
        if not hasattr(self, "n_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit() first")


class CorrelationEstimator(_PnEstimatorBase):
    """Raw PN correlation estimator (no refinement)."""

    method = EstimatorMethod.CORRELATION

    def _refine(self, hbar):
        return np.asarray(hbar, dtype=np.complex128)


class FullInverseEstimator(_PnEstimatorBase):
    """Correlation estimator refined by the full inverse autocorrelation
    matrix; interference-free at twice the CRB noise level."""

    method = EstimatorMethod.INVERSE_FULL

    def _fit_refinement(self):
        self.inverse_ = correlation_inverse(self.n_)

    def _refine(self, hbar):
        return self.inverse_.apply(np.asarray(hbar, dtype=np.complex128))


class _TruncatedBase(_PnEstimatorBase):
    def __init__(self, sequence=None, channel_length=None):
        super().__init__(sequence=sequence)
        self.channel_length = channel_length

    def _fit_refinement(self):
        self.channel_length_ = check_channel_length(self.channel_length, self.n_)


class TruncatedInverseEstimator(_TruncatedBase):
    """Truncates to a known channel length and inverts the truncated
    autocorrelation matrix; unbiased and CRB-achieving."""

    method = EstimatorMethod.INVERSE_TRUNCATED

    def _fit_refinement(self):
        super()._fit_refinement()
        self.inverse_ = truncated_correlation_inverse(self.n_, self.channel_length_)

    def _refine(self, hbar):
        hbar = np.asarray(hbar, dtype=np.complex128)
        return self.inverse_.apply(hbar[..., :self.channel_length_])


class InterferenceSubtractionEstimator(_TruncatedBase):
    """Truncates to a known channel length and subtracts the estimated tap
    interference once; reduces the error floor by about (L/N)**2."""

    method = EstimatorMethod.SUBTRACT_INTERFERENCE

    def _fit_refinement(self):
        super()._fit_refinement()
        self.subtractor_ = interference_subtractor(self.n_, self.channel_length_)

    def _refine(self, hbar):
        hbar = np.asarray(hbar, dtype=np.complex128)
        return self.subtractor_.apply(hbar[..., :self.channel_length_])


ESTIMATOR_CLASSES = {
    EstimatorMethod.CORRELATION: CorrelationEstimator,
    EstimatorMethod.INVERSE_FULL: FullInverseEstimator,
    EstimatorMethod.INVERSE_TRUNCATED: TruncatedInverseEstimator,
    EstimatorMethod.SUBTRACT_INTERFERENCE: InterferenceSubtractionEstimator,
}


def make_estimator(method, sequence, channel_length=None):
    """Construct (unfitted) the estimator class registered for ``method``."""
    method = EstimatorMethod(method)
    cls = ESTIMATOR_CLASSES[method]
    if method in TRUNCATED_METHODS:
        return cls(sequence=sequence, channel_length=channel_length)
    return cls(sequence=sequence)


def estimate_cir(received, sequence, method=EstimatorMethod.CORRELATION,
                 channel_length=None) -> CirEstimate:
    """One-shot CIR estimation of a single received block.

    Convenience wrapper that fits the registered estimator and returns a
    :class:`CirEstimate` carrying the method and assumed length.
    """
    method = EstimatorMethod(method)
    est = make_estimator(method, sequence, channel_length).fit()
    taps = est.transform(received)
    assumed = est.channel_length_ if method in TRUNCATED_METHODS else None
    return CirEstimate(taps=taps, method=method, assumed_length=assumed)


def refine_estimate(estimate: CirEstimate, method,
                    channel_length=None) -> CirEstimate:
    """Refine a raw correlation :class:`CirEstimate` with one of the improved
    methods.

    Raises
    ------
    ValueError
        If ``estimate`` was not produced by the correlation method, or if
        ``method`` is not a refinement.
    """
    method = EstimatorMethod(method)
    if estimate.method is not EstimatorMethod.CORRELATION:
        raise ValueError(
            f"refinements expect a correlation estimate, got {estimate.method.value!r}")
    if method is EstimatorMethod.CORRELATION:
        raise ValueError("correlation is the front end, not a refinement")
    if method is EstimatorMethod.INVERSE_FULL:
        return CirEstimate(taps=refine_full_inverse(estimate.taps), method=method)
    if method is EstimatorMethod.INVERSE_TRUNCATED:
        taps = refine_truncated_inverse(estimate.taps, channel_length)
    else:
        taps = refine_subtract_interference(estimate.taps, channel_length)
    return CirEstimate(taps=taps, method=method,
                       assumed_length=int(channel_length))
