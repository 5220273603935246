"""Maximal-length (m-) sequence generation and circular correlation primitives.

An m-sequence of degree ``r`` is produced by a linear feedback shift register
with a primitive feedback polynomial and has length ``N = 2**r - 1``.  Mapped
to antipodal +/-1 symbols it has the two-valued circular autocorrelation

    R(0) = 1,    R(k) = -1/N    for k = 1 .. N-1,

which is the property every estimator in this package builds on.  Any circular
shift of an m-sequence is again an m-sequence, so a guard interval built from
cyclic extensions of one period can be treated as a single period for
correlation purposes.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_pn_symbols

# Feedback masks for one primitive polynomial per degree.  Bit k of the mask
# is the coefficient of x**k; the constant and leading coefficients are always
# set.  The DTMB transmission standard fixes its own registers; these defaults
# are non-normative stand-ins that satisfy the same two-valued autocorrelation
# (maximality is re-verified at generation time).
DEFAULT_POLYNOMIALS = {
    2: 0b111,            # x^2 + x + 1
    3: 0b1011,           # x^3 + x + 1
    4: 0b10011,          # x^4 + x + 1
    5: 0b100101,         # x^5 + x^2 + 1
    6: 0b1000011,        # x^6 + x + 1
    7: 0b10000011,       # x^7 + x + 1
    8: 0x171,            # x^8 + x^6 + x^5 + x^4 + 1
    9: 0x221,            # x^9 + x^5 + 1
    10: 0x409,           # x^10 + x^3 + 1
    11: 0x805,           # x^11 + x^2 + 1
    12: 0x1053,          # x^12 + x^6 + x^4 + x + 1
}

# (total guard length, sequence length N, cyclic-prefix length) presets used by
# the DTMB frame header: (420, 255, 165) and (945, 511, 434).
DTMB_PRESETS = {
    "dtmb420": (8, 165),
    "dtmb945": (9, 434),
}


@dataclass(frozen=True, eq=False)
class MSequence:
    """One period of an m-sequence mapped to +/-1 symbols.

    Attributes
    ----------
    symbols : ndarray, shape (N,)
        Antipodal symbols, bit 0 -> +1 and bit 1 -> -1.  Read-only.
    degree : int
        Shift-register length r, with N = 2**r - 1.
    polynomial : int
        Feedback polynomial bitmask (bit k = coefficient of x**k).
    seed_state : int
        Initial register state, nonzero.
    """

    symbols: np.ndarray
    degree: int
    polynomial: int
    seed_state: int

    @property
    def n(self) -> int:
        """Sequence length N = 2**degree - 1."""
        return self.symbols.size

    def __eq__(self, other):
        if not isinstance(other, MSequence):
            return NotImplemented
        return (self.degree == other.degree
                and self.polynomial == other.polynomial
                and self.seed_state == other.seed_state
                and np.array_equal(self.symbols, other.symbols))

    def __hash__(self):
        return hash((self.degree, self.polynomial, self.seed_state))


def generate_m_sequence(degree, polynomial=None, seed_state=1) -> MSequence:
    """Generate one full period of an m-sequence.

    Parameters
    ----------
    degree : int
        Register length r; the sequence has length ``2**r - 1``.
    polynomial : int, optional
        Feedback polynomial bitmask.  Defaults to the entry of
        ``DEFAULT_POLYNOMIALS`` for ``degree``.
    seed_state : int, optional
        Initial register state; any nonzero value yields the same sequence up
        to a circular shift.

    Returns
    -------
    MSequence

    Raises
    ------
    ValueError
        If ``seed_state`` is zero (degenerate LFSR state), or if the register
        does not traverse the full period ``2**degree - 1``, which means the
        polynomial is not primitive.
    """
    degree = int(degree)
    if degree < 2:
        raise ValueError(f"degree must be >= 2, got {degree}")
    if polynomial is None:
        try:
            polynomial = DEFAULT_POLYNOMIALS[degree]
        except KeyError:
            raise ValueError(
                f"no default polynomial for degree {degree}; known degrees: "
                f"{sorted(DEFAULT_POLYNOMIALS)}") from None
    polynomial = int(polynomial)
    seed_state = int(seed_state)

    n = (1 << degree) - 1
    if seed_state == 0:
        raise ValueError("degenerate LFSR state: seed_state must be nonzero")
    if not 0 < seed_state <= n:
        raise ValueError(f"seed_state must fit in {degree} bits, got {seed_state}")
    # A primitive polynomial of degree r has both the x**r and constant terms.
    if polynomial >> degree != 1 or polynomial & 1 != 1:
        raise ValueError(
            f"non-primitive polynomial: mask {polynomial:#x} is not a degree-"
            f"{degree} polynomial with a constant term")

    # Galois LFSR: one step multiplies the state by x modulo the polynomial.
    feedback = polynomial >> 1
    state = seed_state
    bits = np.empty(n, dtype=np.int8)
    for i in range(n):
        out = state & 1
        bits[i] = out
        state >>= 1
        if out:
            state ^= feedback
        if state == seed_state and i + 1 < n:
            raise ValueError(
                f"non-primitive polynomial: mask {polynomial:#x} has period "
                f"{i + 1} < {n}")
    if state != seed_state:
        raise ValueError(
            f"non-primitive polynomial: mask {polynomial:#x} does not return "
            f"to the seed state after {n} steps")

    symbols = 1.0 - 2.0 * bits.astype(np.float64)
    symbols.flags.writeable = False
    return MSequence(symbols=symbols, degree=degree, polynomial=polynomial,
                     seed_state=seed_state)


def circular_autocorrelation(sequence, lag) -> float:
    """Normalized circular autocorrelation ``(1/N) sum_m p[m] conj(p[(m+lag) % N])``.

    The sum is accumulated in integer arithmetic (the symbols are exactly
    +/-1), so for a true m-sequence the result is exactly ``1.0`` at lag 0 and
    exactly ``-1/N`` at every other lag.
    """
    symbols = as_pn_symbols(sequence)
    n = symbols.size
    lag = int(lag)
    if not 0 <= lag < n:
        raise ValueError(f"lag must be in [0, {n}), got {lag}")
    ints = symbols.astype(np.int64)
    acc = int(np.dot(ints, np.roll(ints, -lag)))
    return acc / n


@dataclass(frozen=True)
class GuardInterval:
    """A PN guard interval: an m-sequence body plus its cyclic prefix.

    The transmitted guard is the last ``cp_length`` body symbols prepended to
    the body, so a channel shorter than ``cp_length + 1`` taps leaves the body
    free of inter-symbol interference and the received body equals a circular
    convolution of body and channel.
    """

    body: MSequence
    cp_length: int

    def __post_init__(self):
        if not 0 <= self.cp_length <= self.body.n:
            raise ValueError(
                f"cp_length must be in [0, {self.body.n}], got {self.cp_length}")

    @property
    def total_length(self) -> int:
        return self.body.n + self.cp_length

    def transmit_symbols(self) -> np.ndarray:
        """The full transmitted guard: cyclic prefix followed by the body."""
        body = self.body.symbols
        return np.concatenate([body[body.size - self.cp_length:], body])


def dtmb_guard_interval(preset, polynomial=None, seed_state=1) -> GuardInterval:
    """Build a DTMB guard-interval preset: ``dtmb420`` (N=255, CP=165) or
    ``dtmb945`` (N=511, CP=434)."""
    try:
        degree, cp_length = DTMB_PRESETS[preset]
    except KeyError:
        raise ValueError(f"unknown preset {preset!r}; choose from "
                         f"{sorted(DTMB_PRESETS)}") from None
    body = generate_m_sequence(degree, polynomial=polynomial, seed_state=seed_state)
    return GuardInterval(body=body, cp_length=cp_length)
