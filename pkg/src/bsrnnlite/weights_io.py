"""BSRW weights container and the deterministic seeded generator.

File layout (all integers little-endian):

    bytes 0..3    magic ``b"BSRW"``
    bytes 4..7    format version, u32 (currently 1)
    bytes 8..15   header length in bytes, u64
    header        UTF-8 JSON: {"tensors": {name: {"shape": [...],
                  "dtype": "f32", "offset": N}}, "meta": {...}}
    padding       zeros up to the payload base, the first multiple of 64
                  at or after byte ``16 + header length``
    payload       raw float32 tensor data; each tensor's offset is
                  relative to the payload base and a multiple of 64

Tensor values from :func:`gen_weights` come from a single SplitMix64
stream: output i (1-based, continuing across tensors in canonical order)
is ``mix(seed + i * GOLDEN)`` mapped to a double in [0, 1) via the top 53
bits, then to float32 in [-0.1, 0.1). SplitMix64 is counter-based, so the
stream is computed vectorized with identical results to the sequential
definition, and files are byte-identical across runs and platforms.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import WeightsFormatError
from .model import ModelConfig, expected_tensors

MAGIC = b"BSRW"
VERSION = 1
ALIGNMENT = 64

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start+1 .. start+count of the SplitMix64 stream for ``seed``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """float32 values in [-0.1, 0.1) drawn from the stream at ``start``."""
    bits = _splitmix64(seed, start, count)
    unit = (bits >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    return (unit * 0.2 - 0.1).astype(np.float32)


def gen_weights(config: ModelConfig, seed: int = 0) -> dict:
    """Deterministic full weight set for ``config``.

    One stream, consumed tensor by tensor in canonical order, so any
    change to the architecture changes every later tensor but the same
    (config, seed) pair always reproduces the same bytes.
    """
    out = {}
    cursor = 0
    for name, shape in expected_tensors(config).items():
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        out[name] = _uniform_block(seed, cursor, count).reshape(shape)
        cursor += count
    return out


def _align_up(n: int) -> int:
    return (n + ALIGNMENT - 1) // ALIGNMENT * ALIGNMENT


def save_weights(path: str | Path, arrays: dict, meta: dict | None = None) -> None:
    """Write a name -> float32 array mapping in container order."""
    tensors = {}
    offset = 0
    blobs = []
    for name, arr in arrays.items():
        a = np.ascontiguousarray(arr, dtype=np.float32)
        tensors[name] = {"shape": list(a.shape), "dtype": "f32", "offset": offset}
        blobs.append(a.tobytes())
        offset = _align_up(offset + a.nbytes)

    header = json.dumps({"tensors": tensors, "meta": meta or {}}).encode("utf-8")
    payload_base = _align_up(16 + len(header))
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.uint32(VERSION).tobytes())
        fh.write(np.uint64(len(header)).tobytes())
        fh.write(header)
        fh.write(b"\0" * (payload_base - 16 - len(header)))
        pos = 0
        for info, blob in zip(tensors.values(), blobs):
            fh.write(b"\0" * (info["offset"] - pos))
            fh.write(blob)
            pos = info["offset"] + len(blob)


def load_weights(path: str | Path):
    """Read a BSRW file back into ``(arrays, meta)``.

    Arrays come back float32 in manifest order. Structural problems
    (magic, version, dtype, offsets out of range or misaligned) raise
    WeightsFormatError; whether the tensor *set* matches a config is the
    model builder's concern.
    """
    try:
        raw = Path(path).read_bytes()
    except IsADirectoryError as exc:
        raise WeightsFormatError(f"{path} is a directory") from exc
    if len(raw) < 16 or raw[:4] != MAGIC:
        raise WeightsFormatError(f"{path} is not a weights file (bad magic)")
    version = int(np.frombuffer(raw[4:8], dtype=np.uint32)[0])
    if version != VERSION:
        raise WeightsFormatError(f"unsupported weights format version {version}")
    header_len = int(np.frombuffer(raw[8:16], dtype=np.uint64)[0])
    if 16 + header_len > len(raw):
        raise WeightsFormatError("header length exceeds file size")
    try:
        doc = json.loads(raw[16 : 16 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise WeightsFormatError(f"corrupt header: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("tensors"), dict):
        raise WeightsFormatError("header missing tensor manifest")

    payload_base = _align_up(16 + header_len)
    payload = raw[payload_base:]
    arrays = {}
    for name, info in doc["tensors"].items():
        if info.get("dtype") != "f32":
            raise WeightsFormatError(f"tensor {name} has unsupported dtype {info.get('dtype')!r}")
        shape = tuple(int(d) for d in info["shape"])
        offset = int(info["offset"])
        if offset % ALIGNMENT:
            raise WeightsFormatError(f"tensor {name} offset {offset} not {ALIGNMENT}-byte aligned")
        nbytes = int(np.prod(shape, dtype=np.int64)) * 4 if shape else 4
        if offset + nbytes > len(payload):
            raise WeightsFormatError(f"tensor {name} extends past end of file")
        arrays[name] = np.frombuffer(payload[offset : offset + nbytes], dtype=np.float32).reshape(shape)
    return arrays, doc.get("meta", {})
