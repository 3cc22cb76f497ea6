"""Shared helpers: hand-rolled WAV byte builders and signal synthesis.

The WAV builders here are written directly against the RIFF byte layout with
struct, independent of the package's writer, so decode tests check the parser
against the format spec rather than against itself.
"""

import struct

import numpy as np
import pytest

from soundnet.audio_io import AudioBuffer


def wav_bytes(payload: bytes, *, channels=1, rate=8000, bits=16, format_code=1, extra_chunks=()):
    width = bits // 8
    chunks = [
        b"fmt " + struct.pack("<I", 16)
        + struct.pack("<HHIIHH", format_code, channels, rate, rate * width * channels, width * channels, bits),
    ]
    chunks.extend(extra_chunks)
    chunks.append(b"data" + struct.pack("<I", len(payload)) + payload)
    body = b"WAVE" + b"".join(chunks)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def pcm16_payload(values):
    return struct.pack(f"<{len(values)}h", *values)


def pcm24_payload(values):
    out = bytearray()
    for v in values:
        out += int(v).to_bytes(3, "little", signed=True)
    return bytes(out)


def float32_payload(values):
    return struct.pack(f"<{len(values)}f", *values)


def sine(freq_hz, seconds, rate, amplitude=0.5):
    t = np.arange(int(round(seconds * rate))) / rate
    return amplitude * np.sin(2.0 * np.pi * freq_hz * t)


def tone_buffer(freq_hz, seconds, rate, amplitude=0.5):
    return AudioBuffer(samples=sine(freq_hz, seconds, rate, amplitude), sample_rate_hz=rate)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
