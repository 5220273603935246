"""Input validation helpers shared by the estimator API and the simulator."""

import numpy as np


def as_complex_block(X, n_features=None, name="X"):
    """Coerce ``X`` to a 2-D complex block of received vectors.

    Accepts a single length-``n`` vector or a ``(n_blocks, n)`` array.

    Returns
    -------
    block : ndarray, shape (n_blocks, n), complex
    was_1d : bool
        True if the input was a single vector, so callers can squeeze
        their output back to 1-D.
    """
    arr = np.asarray(X)
    was_1d = arr.ndim == 1
    if was_1d:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a vector or a 2-D block of vectors, "
                         f"got ndim={np.asarray(X).ndim}")
    if n_features is not None and arr.shape[1] != n_features:
        raise ValueError(f"{name} length mismatch: expected vectors of length "
                         f"{n_features}, got {arr.shape[1]}")
    return arr.astype(np.complex128, copy=False), was_1d


def as_pn_symbols(sequence, name="sequence"):
    """Extract a validated +/-1 symbol vector from a sequence object or array."""
    if sequence is None:
        raise ValueError(f"{name} is required")
    symbols = np.asarray(getattr(sequence, "symbols", sequence), dtype=np.float64)
    if symbols.ndim != 1 or symbols.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D symbol vector")
    if not np.all(np.abs(symbols) == 1.0):
        raise ValueError(f"{name} symbols must all be +1 or -1")
    return symbols


def check_channel_length(length, n, name="channel_length"):
    """Validate an assumed channel length against the sequence length."""
    if length is None:
        raise ValueError(f"{name} is required for truncated estimators")
    length = int(length)
    if not 1 <= length <= n:
        raise ValueError(f"{name} must be in [1, {n}], got {length}")
    return length
