"""Small shared builders for the test suite."""

import dataclasses

import numpy as np

from bsrnnlite import ModelConfig, StftConfig, BandConfig, build, gen_weights


def tiny_config(**overrides) -> ModelConfig:
    """A few-thousand-parameter model that exercises every code path."""
    base = dict(
        stft=StftConfig(sample_rate=8000, fft_size=32, hop_size=8),
        bands=BandConfig(((0, 6), (6, 12), (12, 17))),
        feature_dim=6,
        hidden_dim=4,
        num_layers=2,
        name="tiny",
    )
    base.update(overrides)
    return ModelConfig(**base)


def build_tiny(seed=0, **overrides):
    cfg = tiny_config(**overrides)
    return cfg, build(cfg, gen_weights(cfg, seed))


def with_fields(cfg: ModelConfig, **overrides) -> ModelConfig:
    return dataclasses.replace(cfg, **overrides)


def random_band_layout(rng: np.random.Generator, num_bins: int, max_bands: int = 5) -> BandConfig:
    """Random contiguous partition of [0, num_bins) into 1..max_bands bands."""
    k = int(rng.integers(1, min(max_bands, num_bins) + 1))
    cuts = sorted(rng.choice(np.arange(1, num_bins), size=k - 1, replace=False).tolist())
    edges = [0] + cuts + [num_bins]
    return BandConfig(tuple((edges[i], edges[i + 1]) for i in range(k)))
