"""WAV decoding into normalized mono sample buffers.

Supports RIFF/WAVE with integer PCM (16/24/32 bit) and IEEE float (32/64 bit)
payloads, 1 or 2 channels. Everything else is rejected explicitly rather than
guessed at.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorruptHeader, EmptyAudio, UnsupportedFormat

_FORMAT_PCM = 0x0001
_FORMAT_IEEE_FLOAT = 0x0003
_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True)
class AudioBuffer:
    """Decoded mono audio: float64 samples in [-1, 1] plus the native rate."""

    samples: np.ndarray
    sample_rate_hz: int
    source_path: str = ""
    duration_s: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "duration_s", len(self.samples) / self.sample_rate_hz)
        self.samples.setflags(write=False)

    def __len__(self):
        return len(self.samples)


def decode_wav(path) -> AudioBuffer:
    """Decode a WAV file to a mono AudioBuffer.

    Multi-channel input is downmixed by per-frame arithmetic mean; integer
    samples are scaled by 2^(bits-1) so the most negative code maps to -1.0.

    Raises UnsupportedFormat, CorruptHeader or EmptyAudio.
    """
    data = Path(path).read_bytes()
    fmt, raw = _parse_riff(data)
    samples = _decode_payload(raw, fmt)
    if samples.size == 0:
        raise EmptyAudio(f"{path}: data chunk holds zero frames")
    if fmt.channels > 1:
        samples = samples.reshape(-1, fmt.channels).mean(axis=1)
    samples = np.clip(samples, -1.0, 1.0)
    return AudioBuffer(samples=samples, sample_rate_hz=fmt.sample_rate, source_path=str(path))


def write_wav_float32(path, samples, sample_rate_hz: int) -> None:
    """Write mono samples as a 32-bit IEEE float WAV (lossless for float32 data)."""
    payload = np.asarray(samples, dtype="<f4").tobytes()
    _write_wav(path, payload, sample_rate_hz, format_code=_FORMAT_IEEE_FLOAT, bits=32)


def write_wav_int16(path, samples, sample_rate_hz: int) -> None:
    """Write mono samples as 16-bit PCM, clipping to [-1, 1] first."""
    clipped = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    codes = np.round(clipped * 32767.0).astype("<i2")
    _write_wav(path, codes.tobytes(), sample_rate_hz, format_code=_FORMAT_PCM, bits=16)


@dataclass(frozen=True)
class _FmtChunk:
    format_code: int
    channels: int
    sample_rate: int
    bits: int


def _parse_riff(data: bytes):
    if len(data) < 12:
        raise CorruptHeader("file shorter than a RIFF header")
    if data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeader("missing RIFF/WAVE magic")
    riff_size = struct.unpack_from("<I", data, 4)[0]
    if riff_size + 8 > len(data):
        raise CorruptHeader("RIFF size exceeds file length")

    fmt = None
    raw = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        size = struct.unpack_from("<I", data, pos + 4)[0]
        body_start = pos + 8
        if body_start + size > len(data):
            raise CorruptHeader(f"chunk {cid!r} overruns file end")
        body = data[body_start : body_start + size]
        if cid == b"fmt ":
            fmt = _parse_fmt(body)
        elif cid == b"data":
            raw = body
        # chunks are word-aligned: odd sizes carry one pad byte
        pos = body_start + size + (size & 1)

    if fmt is None:
        raise CorruptHeader("no fmt chunk")
    if raw is None:
        raise CorruptHeader("no data chunk")
    return fmt, raw


def _parse_fmt(body: bytes) -> _FmtChunk:
    if len(body) < 16:
        raise CorruptHeader("fmt chunk shorter than 16 bytes")
    code, channels, rate, _byte_rate, _block, bits = struct.unpack_from("<HHIIHH", body, 0)
    if code == _FORMAT_EXTENSIBLE:
        # WAVE_FORMAT_EXTENSIBLE: actual code is the first word of the GUID
        if len(body) < 40:
            raise CorruptHeader("extensible fmt chunk truncated")
        code = struct.unpack_from("<H", body, 24)[0]
    if code not in (_FORMAT_PCM, _FORMAT_IEEE_FLOAT):
        raise UnsupportedFormat(f"compression code 0x{code:04x} is not PCM or IEEE float")
    if channels not in (1, 2):
        raise UnsupportedFormat(f"{channels} channels (only mono/stereo supported)")
    if rate <= 0:
        raise CorruptHeader("non-positive sample rate")
    if code == _FORMAT_PCM and bits not in (16, 24, 32):
        raise UnsupportedFormat(f"{bits}-bit integer PCM not supported")
    if code == _FORMAT_IEEE_FLOAT and bits not in (32, 64):
        raise UnsupportedFormat(f"{bits}-bit float not supported")
    return _FmtChunk(format_code=code, channels=channels, sample_rate=rate, bits=bits)


def _decode_payload(raw: bytes, fmt: _FmtChunk) -> np.ndarray:
    width = fmt.bits // 8
    frame = width * fmt.channels
    if len(raw) % frame != 0:
        raise CorruptHeader("data chunk size is not a whole number of frames")

    if fmt.format_code == _FORMAT_IEEE_FLOAT:
        dtype = "<f4" if fmt.bits == 32 else "<f8"
        return np.frombuffer(raw, dtype=dtype).astype(np.float64)

    if fmt.bits == 16:
        codes = np.frombuffer(raw, dtype="<i2").astype(np.float64)
    elif fmt.bits == 32:
        codes = np.frombuffer(raw, dtype="<i4").astype(np.float64)
    else:  # 24-bit: widen each 3-byte group to int32 then shift back
        b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3)
        as32 = (
            b[:, 0].astype(np.uint32)
            | (b[:, 1].astype(np.uint32) << 8)
            | (b[:, 2].astype(np.uint32) << 16)
        )
        codes = (as32.astype(np.int32) << 8 >> 8).astype(np.float64)
    return codes / float(2 ** (fmt.bits - 1))


def _write_wav(path, payload: bytes, rate: int, format_code: int, bits: int) -> None:
    width = bits // 8
    header = b"".join(
        [
            b"RIFF",
            struct.pack("<I", 36 + len(payload)),
            b"WAVE",
            b"fmt ",
            struct.pack("<IHHIIHH", 16, format_code, 1, rate, rate * width, width, bits),
            b"data",
            struct.pack("<I", len(payload)),
        ]
    )
    Path(path).write_bytes(header + payload)
