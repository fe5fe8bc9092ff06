"""Mono wav reading/writing on top of scipy.io.wavfile.

Only the two formats the pipeline produces are accepted: 16-bit PCM and
32-bit float. PCM samples are scaled by 1/32768 so a pcm16 round trip is
bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import AudioFormatError

PCM16 = "pcm16"
FLOAT32 = "float32"

_PCM_SCALE = 32768.0


def read_wav(path: str | Path):
    """Read a mono wav file.

    Returns:
        (samples, sample_rate, source_format): float32 samples in [-1, 1)
        for PCM input, the file's sample rate, and ``"pcm16"`` or
        ``"float32"`` so callers can write output in the same format.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except (ValueError, EOFError) as exc:
        raise AudioFormatError(f"cannot parse wav file {path}: {exc}") from exc
    if data.ndim != 1:
        raise AudioFormatError(f"mono required, got {data.shape[1]} channels")
    if data.dtype == np.int16:
        return data.astype(np.float32) / np.float32(_PCM_SCALE), int(rate), PCM16
    if data.dtype == np.float32:
        return data, int(rate), FLOAT32
    raise AudioFormatError(
        f"unsupported sample format {data.dtype}; 16-bit PCM or float32 required"
    )


def write_wav(path: str | Path, samples: np.ndarray, sample_rate: int, fmt: str = PCM16) -> None:
    """Write a mono float waveform as pcm16 (clipped) or float32."""
    x = np.asarray(samples)
    if x.ndim != 1:
        raise AudioFormatError(f"mono required, got {x.ndim}-dimensional data")
    if fmt == PCM16:
        ints = np.clip(np.rint(x.astype(np.float64) * _PCM_SCALE), -32768, 32767)
        wavfile.write(path, sample_rate, ints.astype(np.int16))
    elif fmt == FLOAT32:
        wavfile.write(path, sample_rate, x.astype(np.float32))
    else:
        raise ValueError(f"unknown wav format {fmt!r}")
