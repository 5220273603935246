"""Two-valued correlation matrices and their O(n) fast application.

The circular autocorrelation matrix of an m-sequence, its inverse, and the
inverse of any leading principal block all share one shape: a single value on
the diagonal and a single value everywhere else,

    M = (diag - offdiag) * I + offdiag * J,

with ``J`` the all-ones matrix.  Storing the two scalars instead of n**2
entries makes a matrix-vector product a scale plus a global-sum correction,
O(n) instead of O(n**2).  Dense counterparts are provided as reference
oracles for tests.
"""

from dataclasses import dataclass

import numpy as np


class OpCounter:
    """Accumulates scalar multiply/add counts along instrumented fast paths."""

    def __init__(self):
        self.count = 0

    def add(self, amount):
        self.count += int(amount)


@dataclass(frozen=True)
class TwoValuedMatrix:
    """An ``n x n`` matrix with constant diagonal and constant off-diagonal."""

    n: int
    diag: float
    offdiag: float

    def apply(self, v, ops=None):
        """Multiply onto ``v`` along its last axis in O(n) per vector.

        Uses ``M v = (diag - offdiag) v + offdiag * sum(v)``.  ``ops``, if
        given, is charged 3n scalar operations per vector (n-1 adds for the
        sum, n scaling multiplies, n+1 for the correction).
        """
        v = np.asarray(v)
        if v.shape[-1] != self.n:
            raise ValueError(
                f"length mismatch: matrix is {self.n}x{self.n}, vector has "
                f"length {v.shape[-1]}")
        if ops is not None:
            n_vectors = v.size // self.n if v.size else 0
            ops.add(3 * self.n * n_vectors)
        total = v.sum(axis=-1, keepdims=True)
        return (self.diag - self.offdiag) * v + self.offdiag * total

    def dense(self) -> np.ndarray:
        """Materialize the matrix. Intended for tests and small problems."""
        out = np.full((self.n, self.n), self.offdiag, dtype=np.float64)
        np.fill_diagonal(out, self.diag)
        return out


def dense_matvec(matrix, v, ops=None):
    """Dense matrix-vector oracle; charges the full n*(2n-1) operation count."""
    matrix = np.asarray(matrix)
    v = np.asarray(v)
    n = matrix.shape[0]
    if ops is not None:
        ops.add(n * (2 * n - 1))
    return matrix @ v


def correlation_matrix(n) -> TwoValuedMatrix:
    """Circular autocorrelation matrix of a length-``n`` m-sequence:
    1 on the diagonal, -1/n elsewhere."""
    n = _check_dim(n)
    return TwoValuedMatrix(n=n, diag=1.0, offdiag=-1.0 / n)


def correlation_inverse(n) -> TwoValuedMatrix:
    """Closed-form inverse of :func:`correlation_matrix`:
    diagonal 2n/(n+1), off-diagonal n/(n+1)."""
    n = _check_dim(n)
    return TwoValuedMatrix(n=n, diag=2.0 * n / (n + 1), offdiag=n / (n + 1.0))


def truncated_correlation_inverse(n, l) -> TwoValuedMatrix:
    """Closed-form inverse of the leading ``l x l`` block of
    :func:`correlation_matrix` of size ``n``.

    With ``D = (n+1)(n+1-l) = n**2 + 2n - nl - l + 1`` the inverse has
    diagonal ``1 + (l-1)/D`` and off-diagonal ``n/D``.
    """
    n, l = _check_block(n, l)
    d = (n + 1.0) * (n + 1.0 - l)
    return TwoValuedMatrix(n=l, diag=1.0 + (l - 1.0) / d, offdiag=n / d)


def interference_subtractor(n, l) -> TwoValuedMatrix:
    """The ``l x l`` operator ``I - D`` where ``D`` holds the off-diagonal
    entries of the truncated correlation matrix (all equal to -1/n).

    Applying it to a truncated correlation estimate cancels the first-order
    mutual interference between channel taps in O(l).
    """
    n, l = _check_block(n, l)
    return TwoValuedMatrix(n=l, diag=1.0, offdiag=1.0 / n)


def dense_correlation_matrix(n) -> np.ndarray:
    """Dense oracle for :func:`correlation_matrix`."""
    return correlation_matrix(n).dense()


def dense_correlation_inverse(n) -> np.ndarray:
    """Dense oracle for :func:`correlation_inverse`."""
    return correlation_inverse(n).dense()


def dense_truncated_correlation_inverse(n, l) -> np.ndarray:
    """Dense oracle for :func:`truncated_correlation_inverse`."""
    return truncated_correlation_inverse(n, l).dense()


def _check_dim(n) -> int:
    n = int(n)
    if n < 2:
        raise ValueError(f"matrix dimension must be >= 2, got {n}")
    return n


def _check_block(n, l):
    n = _check_dim(n)
    l = int(l)
    if not 1 <= l <= n:
        raise ValueError(f"block size must be in [1, {n}], got {l}")
    return n, l
