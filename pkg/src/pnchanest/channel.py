"""Multipath fading channel models and received-PN synthesis.

Channels are tapped delay lines described by a power-delay profile.  Each
realization draws circularly-symmetric complex Gaussian taps (Rayleigh
amplitudes) with the profile's average powers, normalized so the expected
total power is 1.  The received PN is the circular convolution of one
m-sequence period with the channel plus complex AWGN; the guard-interval path
reproduces it sample-exactly through a full linear convolution whose cyclic
prefix is discarded.
"""

from dataclasses import dataclass, field

import numpy as np

from .sequences import GuardInterval
from .validation import as_pn_symbols

# DTMB baseband rate: one sample every 1/7.56 microseconds.
DTMB_SAMPLES_PER_US = 7.56


@dataclass(frozen=True)
class ChannelProfile:
    """A power-delay profile: tap delays in microseconds and powers in dB."""

    name: str
    delays_us: tuple
    powers_db: tuple
    sampling_rate: float = DTMB_SAMPLES_PER_US

    def __post_init__(self):
        delays = tuple(float(d) for d in self.delays_us)
        powers = tuple(float(p) for p in self.powers_db)
        object.__setattr__(self, "delays_us", delays)
        object.__setattr__(self, "powers_db", powers)
        if len(delays) == 0 or len(delays) != len(powers):
            raise ValueError("profile needs matching, non-empty delay and power lists")
        if delays[0] < 0:
            raise ValueError("first tap delay must be >= 0")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError("tap delays must be strictly increasing")
        if self.sampling_rate <= 0:
            raise ValueError("sampling_rate must be positive")


# COST 207 profiles quantized by the DTMB sample grid: Typical Urban spans 38
# samples, Hilly Terrain 130.
TU6 = ChannelProfile(
    name="tu6",
    delays_us=(0.0, 0.2, 0.5, 1.6, 2.3, 5.0),
    powers_db=(-3.0, 0.0, -5.0, -6.0, -8.0, -10.0),
)
HT = ChannelProfile(
    name="ht",
    delays_us=(0.0, 0.2, 0.4, 0.6, 15.0, 17.2),
    powers_db=(0.0, -2.0, -4.0, -7.0, -6.0, -12.0),
)
PROFILES = {"tu6": TU6, "ht": HT}


def quantize_profile(profile):
    """Quantize a profile onto the sample grid.

    Interior taps land on ``round(delay * sampling_rate)``.  The channel
    length is ``L = round(max_delay * sampling_rate)`` (at least 1) and the
    final tap is pinned to index ``L - 1``, which keeps the published DTMB
    span counts (TU-6 -> 38 samples, HT -> 130) consistent with a
    zero-indexed tap vector.

    Returns
    -------
    positions : ndarray of int
    powers : ndarray
        Linear tap powers normalized to sum to 1.
    length : int
        Number of channel coefficients L.
    """
    rate = profile.sampling_rate
    length = max(1, round(profile.delays_us[-1] * rate))
    positions = [round(d * rate) for d in profile.delays_us[:-1]]
    positions.append(length - 1)
    positions = np.asarray(positions, dtype=np.intp)
    if np.any(np.diff(positions) <= 0):
        raise ValueError(
            f"colliding taps: profile {profile.name!r} quantizes to positions "
            f"{positions.tolist()} at {rate} samples/us")
    powers = 10.0 ** (np.asarray(profile.powers_db, dtype=np.float64) / 10.0)
    powers /= powers.sum()
    return positions, powers, length


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One random draw of the channel impulse response.

    ``taps`` has length L with zeros between the profile's quantized delay
    positions.
    """

    taps: np.ndarray
    profile: ChannelProfile | None = None
    draw_index: int = 0

    @property
    def length(self) -> int:
        return self.taps.size


@dataclass(frozen=True, eq=False)
class ReceivedPn:
    """An ISI-free received PN block: N samples, noise variance, and the
    realization that produced it."""

    samples: np.ndarray
    sigma_w2: float
    truth: ChannelRealization | None = None


def realize_channel(profile, rng, draw_index=0) -> ChannelRealization:
    """Draw one channel realization from ``profile``.

    Each tap is circularly-symmetric complex Gaussian with variance equal to
    its normalized average power; taps are independent.  Consumes exactly one
    ``standard_normal((2, n_taps))`` call from ``rng``.
    """
    positions, powers, length = quantize_profile(profile)
    g = rng.standard_normal((2, positions.size))
    gains = np.sqrt(powers / 2.0) * (g[0] + 1j * g[1])
    taps = np.zeros(length, dtype=np.complex128)
    taps[positions] = gains
    return ChannelRealization(taps=taps, profile=profile, draw_index=draw_index)


def receive_pn(sequence, channel, sigma_w2, rng=None) -> ReceivedPn:
    """Synthesize the received PN block ``d``: circular convolution of the
    sequence with the channel taps plus complex AWGN of per-sample variance
    ``sigma_w2``.

    ``channel`` may be a :class:`ChannelRealization` or a plain complex tap
    vector of length ``L <= N``.  ``rng`` is only consumed when
    ``sigma_w2 > 0``.
    """
    symbols = as_pn_symbols(sequence)
    taps, truth = _as_taps(channel)
    n = symbols.size
    if taps.size > n:
        raise ValueError(
            f"channel exceeds sequence length: L={taps.size} > N={n}")
    samples = np.zeros(n, dtype=np.complex128)
    for position in np.flatnonzero(taps):
        samples += taps[position] * np.roll(symbols, position)
    samples += _complex_awgn(rng, n, sigma_w2)
    return ReceivedPn(samples=samples, sigma_w2=float(sigma_w2), truth=truth)


def receive_via_gi(guard: GuardInterval, channel, sigma_w2, rng=None) -> ReceivedPn:
    """Synthesize the received PN through the full guard-interval path.

    The whole transmitted guard (cyclic prefix + body) is linearly convolved
    with the channel and the first ``cp_length`` output samples are
    discarded.  Because the prefix absorbs the channel's delay spread, the
    surviving N samples are exactly the circular convolution of body and
    channel: with a common noise stream the result is sample-identical to
    :func:`receive_pn`.
    """
    taps, truth = _as_taps(channel)
    n = guard.body.n
    cp = guard.cp_length
    if taps.size > cp + 1:
        raise ValueError(
            f"CP shorter than delay spread: L={taps.size} > N_CP+1={cp + 1}")
    tx = guard.transmit_symbols()
    nu = tx.size
    full = np.zeros(nu + max(taps.size, 1) - 1, dtype=np.complex128)
    for position in np.flatnonzero(taps):
        full[position:position + nu] += taps[position] * tx
    samples = full[cp:cp + n].copy()
    samples += _complex_awgn(rng, n, sigma_w2)
    return ReceivedPn(samples=samples, sigma_w2=float(sigma_w2), truth=truth)


def load_profile(path, sampling_rate=DTMB_SAMPLES_PER_US) -> ChannelProfile:
    """Load a profile from a plain-text table.

    Each data row is ``name delay_us power_db`` (comma or whitespace
    separated); blank lines and ``#`` comments are skipped.  All rows must
    carry the same profile name.
    """
    names, delays, powers = [], [], []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = [p for p in text.replace(",", " ").split() if p]
            if len(parts) != 3:
                raise ValueError(
                    f"{path}:{lineno}: expected 'name delay_us power_db', got {line!r}")
            names.append(parts[0])
            delays.append(float(parts[1]))
            powers.append(float(parts[2]))
    if not names:
        raise ValueError(f"{path}: no profile rows found")
    if len(set(names)) != 1:
        raise ValueError(f"{path}: rows name different profiles: {sorted(set(names))}")
    return ChannelProfile(name=names[0], delays_us=tuple(delays),
                          powers_db=tuple(powers), sampling_rate=sampling_rate)


def _as_taps(channel):
    if isinstance(channel, ChannelRealization):
        return np.asarray(channel.taps, dtype=np.complex128), channel
    taps = np.asarray(channel, dtype=np.complex128)
    if taps.ndim != 1 or taps.size == 0:
        raise ValueError("channel taps must be a non-empty 1-D complex vector")
    return taps, None


def _complex_awgn(rng, n, sigma_w2):
    sigma_w2 = float(sigma_w2)
    if sigma_w2 < 0:
        raise ValueError(f"sigma_w2 must be >= 0, got {sigma_w2}")
    if sigma_w2 == 0.0:
        return 0.0
    if rng is None:
        raise ValueError("rng is required when sigma_w2 > 0")
    g = rng.standard_normal((2, n))
    return np.sqrt(sigma_w2 / 2.0) * (g[0] + 1j * g[1])
