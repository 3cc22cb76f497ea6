"""Spectral decomposition and frequency-sequence extraction.

The transform is an in-package iterative radix-2 FFT (inputs are zero-padded
to the next power of two), evaluated against a direct quadratic summation in
the self-test suite. Peak frequencies are always exact bin centers k*fs/N, so
every downstream artifact is bit-reproducible; the bin width is the documented
accuracy bound.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioBuffer
from .errors import EmptyInput

_TWIDDLE_CACHE_MAX = 1 << 16
_twiddle_cache: dict[int, np.ndarray] = {}
_bitrev_cache: dict[int, np.ndarray] = {}


class SequenceMode(enum.Enum):
    FULL_SPECTRUM = "full"
    STFT = "stft"


@dataclass(frozen=True)
class PeakParams:
    """Tunables for spectral peak extraction.

    rel_threshold is a fraction of the per-frame maximum magnitude; floor_db
    is relative to the global maximum magnitude of the whole signal.
    """

    frame_size: int = 4096
    hop: int = 2048
    top_k: int = 5
    rel_threshold: float = 0.1
    floor_db: float = -60.0

    def __post_init__(self):
        if self.frame_size < 2 or self.frame_size & (self.frame_size - 1):
            raise ValueError("frame_size must be a power of two >= 2")
        if not 1 <= self.hop <= self.frame_size:
            raise ValueError("hop must satisfy 1 <= hop <= frame_size")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not 0.0 < self.rel_threshold <= 1.0:
            raise ValueError("rel_threshold must be in (0, 1]")
        if self.floor_db > 0.0:
            raise ValueError("floor_db must be <= 0 dB")


@dataclass(frozen=True)
class Spectrum:
    """Full complex DFT of a real signal."""

    bins: np.ndarray
    n_fft: int
    sample_rate_hz: float

    def bin_hz(self, k) -> float:
        return k * self.sample_rate_hz / self.n_fft


@dataclass(frozen=True)
class FrequencySequence:
    """Ordered extracted frequency components in Hz (all strictly below Nyquist)."""

    values_hz: np.ndarray
    mode: SequenceMode
    extraction_params: PeakParams
    sample_rate_hz: float

    def __len__(self):
        return len(self.values_hz)


def next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def dft(samples, sample_rate_hz: float = 1.0) -> Spectrum:
    """Full complex DFT, zero-padded to the next power of two.

    Raises EmptyInput on an empty sequence.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("cannot transform an empty signal")
    n = next_pow2(x.size)
    buf = np.zeros(n, dtype=np.complex128)
    buf[: x.size] = x
    return Spectrum(bins=_fft_pow2(buf), n_fft=n, sample_rate_hz=sample_rate_hz)


def _bit_reverse_indices(n: int) -> np.ndarray:
    cached = _bitrev_cache.get(n)
    if cached is not None:
        return cached
    levels = n.bit_length() - 1
    idx = np.arange(n, dtype=np.intp)
    rev = np.zeros(n, dtype=np.intp)
    for bit in range(levels):
        rev |= ((idx >> bit) & 1) << (levels - 1 - bit)
    if n <= _TWIDDLE_CACHE_MAX:
        _bitrev_cache[n] = rev
    return rev


def _twiddles(n: int) -> np.ndarray:
    """exp(-2*pi*i*k/n) for k in [0, n/2); stage tables are strided views of this."""
    cached = _twiddle_cache.get(n)
    if cached is not None:
        return cached
    w = np.exp((-2j * np.pi / n) * np.arange(n // 2))
    if n <= _TWIDDLE_CACHE_MAX:
        _twiddle_cache[n] = w
    return w


def _fft_pow2(buf: np.ndarray) -> np.ndarray:
    """In-place iterative Cooley-Tukey on a power-of-two complex buffer."""
    n = buf.size
    if n == 1:
        return buf
    a = buf[_bit_reverse_indices(n)]
    w = _twiddles(n)
    size = 2
    while size <= n:
        half = size // 2
        tw = w[:: n // size]
        m = a.reshape(-1, size)
        t = m[:, half:] * tw
        m[:, half:] = m[:, :half] - t
        m[:, :half] += t
        size *= 2
    return a


def _local_maxima(mag: np.ndarray) -> np.ndarray:
    """Indices of strict local maxima; a plateau counts once, at its lowest index.

    A peak is a sample strictly above its left neighbor whose next *change* to
    the right is a descent, which handles runs of equal values exactly.
    """
    n = mag.size
    if n < 3:
        return np.empty(0, dtype=np.intp)
    d = np.sign(np.diff(mag))
    # next nonzero diff at-or-after each position (0 where the tail is flat)
    nz = d.copy()
    flat = nz == 0
    if flat.any():
        idx = np.arange(n - 1)
        src = np.where(~flat, idx, n - 1)
        src = np.minimum.accumulate(src[::-1])[::-1]
        filled = np.where(src < n - 1, d[np.minimum(src, n - 2)], 0.0)
        nz = np.where(flat, filled, nz)
    k = np.arange(1, n - 1)
    return k[(d[k - 1] > 0) & (nz[k] < 0)]


def extract_sequence_full(spectrum: Spectrum, params: PeakParams | None = None) -> FrequencySequence:
    """Peak frequencies of a whole-signal spectrum, ascending in Hz.

    Candidates are strict local maxima of |y[k]| for k in [1, N/2) passing
    both the relative and dB floors (measured against the maximum over that
    same positive-frequency range). Silence yields an empty sequence.
    """
    params = params or PeakParams()
    half = spectrum.n_fft // 2
    mag = np.abs(spectrum.bins[: half + 1])
    peaks = _local_maxima(mag)
    peaks = peaks[(peaks >= 1) & (peaks < half)]
    top = mag[1:half].max(initial=0.0)
    if top > 0.0 and peaks.size:
        floor = top * 10.0 ** (params.floor_db / 20.0)
        keep = mag[peaks] >= max(params.rel_threshold * top, floor)
        peaks = peaks[keep]
    else:
        peaks = peaks[:0]
    values = peaks.astype(np.float64) * (spectrum.sample_rate_hz / spectrum.n_fft)
    return FrequencySequence(
        values_hz=values,
        mode=SequenceMode.FULL_SPECTRUM,
        extraction_params=params,
        sample_rate_hz=spectrum.sample_rate_hz,
    )


def hann_window(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / (n - 1))


def stft_peak_frames(audio: AudioBuffer, params: PeakParams | None = None) -> list[np.ndarray]:
    """Per-frame peak frequencies (descending magnitude within each frame).

    Hann-windowed frames at the configured hop; only complete frames are
    taken, except that a signal shorter than one frame is zero-padded to a
    single frame. Each frame keeps at most top_k strict local maxima passing
    the per-frame relative threshold and the global dB floor.
    """
    params = params or PeakParams()
    if len(audio) == 0:
        raise EmptyInput("cannot analyze an empty buffer")
    size, hop = params.frame_size, params.hop
    x = audio.samples
    if x.size < size:
        x = np.concatenate([x, np.zeros(size - x.size)])
    n_frames = 1 + (x.size - size) // hop
    window = hann_window(size)
    bin_hz = audio.sample_rate_hz / size
    half = size // 2

    global_max = 0.0
    candidates = []  # (bins, magnitudes) per frame, pre-filtered by rel_threshold
    for i in range(n_frames):
        frame = x[i * hop : i * hop + size] * window
        spec = _fft_pow2(frame.astype(np.complex128))
        mag = np.abs(spec[: half + 1])
        frame_max = mag[1:half].max(initial=0.0)
        global_max = max(global_max, frame_max)
        peaks = _local_maxima(mag)
        peaks = peaks[(peaks >= 1) & (peaks < half)]
        if frame_max > 0.0 and peaks.size:
            peaks = peaks[mag[peaks] >= params.rel_threshold * frame_max]
        else:
            peaks = peaks[:0]
        candidates.append((peaks, mag[peaks]))

    floor = global_max * 10.0 ** (params.floor_db / 20.0)
    frames = []
    for peaks, mags in candidates:
        keep = mags >= floor if global_max > 0.0 else np.zeros(len(mags), dtype=bool)
        peaks, mags = peaks[keep], mags[keep]
        # descending magnitude; stable sort keeps the lower bin first on ties
        order = np.argsort(-mags, kind="stable")[: params.top_k]
        frames.append(peaks[order].astype(np.float64) * bin_hz)
    return frames


def extract_sequence_stft(audio: AudioBuffer, params: PeakParams | None = None) -> FrequencySequence:
    """Time-ordered frequency sequence: per-frame peaks concatenated frame by frame."""
    params = params or PeakParams()
    frames = stft_peak_frames(audio, params)
    values = np.concatenate(frames) if frames else np.empty(0)
    return FrequencySequence(
        values_hz=values,
        mode=SequenceMode.STFT,
        extraction_params=params,
        sample_rate_hz=audio.sample_rate_hz,
    )
