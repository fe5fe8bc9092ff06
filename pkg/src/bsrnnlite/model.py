"""Model configuration, weight layout, and the inference pipeline.

The network is a band-split RNN: a spectrogram is encoded into
``[K bands x T frames x N features]``, run through ``num_layers`` dual-path
layers (a bidirectional band RNN across K, then a causal time RNN across T,
each a residual sublayer of norm -> grouped LSTM -> dense), and decoded by
a per-band mask head. Layer-wise resampling, sub-band pruning, and RNN
grouping plug in here; each with its neutral setting (factor 1, skip 0,
one group) leaves the computation bitwise unchanged.

``canonical-v1`` is the reference configuration. Its feature and hidden
dims were fixed by the integer grid calibration in :mod:`bsrnnlite.macs`
so that the ungrouped baseline costs 1.84 G/s and the two-group variant
1.09 G/s on one second of 16 kHz audio.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bands import (
    BandConfig,
    BandProjection,
    BandSplitWeights,
    MaskBandHead,
    MaskHeadWeights,
    apply_mask,
    band_split,
    canonical_bands,
    estimate_mask,
)
from .dsp import OaConfig, StftConfig, istft, observation_add, stft
from .errors import ConfigError, WeightsFormatError
from .prune import SbpStrategy, apply_pruned_time_rnn, prune_schedule
from .resample import LwrStrategy, plan_resampling, pps_wrap, resampled_sublayer
from .rnn import (
    GroupedLayerWeights,
    LstmWeights,
    dense,
    grouped_forward_batch,
    layer_norm,
)

#: calibrated reference dims (see macs.calibrate_feature_dims)
CANONICAL_FEATURE_DIM = 126
CANONICAL_HIDDEN_DIM = 72
CANONICAL_NUM_LAYERS = 6


@dataclass(frozen=True)
class ModelConfig:
    """Complete, validated description of one model variant."""

    stft: StftConfig
    bands: BandConfig
    feature_dim: int
    hidden_dim: int
    num_layers: int
    group_size: int = 1
    resample: LwrStrategy = LwrStrategy.none()
    prune: SbpStrategy = SbpStrategy.none()
    time_rnn_causal: bool = True
    band_rnn_bidirectional: bool = True
    mask_hidden_ratio: int = 4
    name: str = ""

    def __post_init__(self) -> None:
        if self.feature_dim < 1 or self.hidden_dim < 1:
            raise ConfigError(
                f"feature_dim and hidden_dim must be positive, got "
                f"{self.feature_dim}/{self.hidden_dim}"
            )
        if self.num_layers < 0:
            raise ConfigError(f"num_layers must be >= 0, got {self.num_layers}")
        if self.group_size < 1:
            raise ConfigError(f"group_size must be >= 1, got {self.group_size}")
        if self.feature_dim % self.group_size or self.hidden_dim % self.group_size:
            raise ConfigError(
                f"feature_dim {self.feature_dim} and hidden_dim {self.hidden_dim} "
                f"must be divisible by group_size {self.group_size}"
            )
        if self.mask_hidden_ratio < 1:
            raise ConfigError(f"mask_hidden_ratio must be >= 1, got {self.mask_hidden_ratio}")
        self.bands.validate_for_bins(self.stft.frequency_bins)
        # resolving both plans validates strategy/layer-count compatibility
        plan_resampling(self.resample, self.num_layers)
        prune_schedule(self.prune, self.num_layers, self.bands.num_bands)

    @property
    def num_bands(self) -> int:
        return self.bands.num_bands

    @property
    def mask_hidden_dim(self) -> int:
        return self.mask_hidden_ratio * self.feature_dim

    def with_groups(self, group_size: int, name: str | None = None) -> "ModelConfig":
        return dataclasses.replace(
            self, group_size=group_size, name=self.name if name is None else name
        )

    def with_resample(self, strategy: LwrStrategy, name: str | None = None) -> "ModelConfig":
        return dataclasses.replace(
            self, resample=strategy, name=self.name if name is None else name
        )

    def with_prune(self, strategy: SbpStrategy, name: str | None = None) -> "ModelConfig":
        return dataclasses.replace(
            self, prune=strategy, name=self.name if name is None else name
        )


def canonical_config() -> ModelConfig:
    """The calibrated reference model: 23 bands, 6 layers, N=126, H=72."""
    s = StftConfig()
    return ModelConfig(
        stft=s,
        bands=canonical_bands(s.frequency_bins),
        feature_dim=CANONICAL_FEATURE_DIM,
        hidden_dim=CANONICAL_HIDDEN_DIM,
        num_layers=CANONICAL_NUM_LAYERS,
        name="canonical-v1",
    )


_PRESETS = {
    "canonical-v1": lambda: canonical_config(),
    "canonical-v1-gr": lambda: canonical_config().with_groups(2, "canonical-v1-gr"),
    "canonical-v1-lwr16": lambda: canonical_config().with_resample(
        LwrStrategy.alternating(16), "canonical-v1-lwr16"
    ),
    "canonical-v1-lwr16-sbpp": lambda: canonical_config()
    .with_resample(LwrStrategy.alternating(16))
    .with_prune(SbpStrategy.progressive(), "canonical-v1-lwr16-sbpp"),
    "canonical-v1-full": lambda: canonical_config()
    .with_resample(LwrStrategy.alternating(16))
    .with_prune(SbpStrategy.progressive())
    .with_groups(2, "canonical-v1-full"),
}


def preset_names() -> tuple:
    return tuple(_PRESETS)


def preset_config(name: str) -> ModelConfig:
    try:
        return _PRESETS[name]()
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(_PRESETS)}"
        ) from None


def expected_tensors(config: ModelConfig) -> dict:
    """Tensor name -> shape for every parameter of ``config``.

    The insertion order is the canonical serialization order used by the
    weights file and the seeded generator.
    """
    out: dict = {}
    n, h, g = config.feature_dim, config.hidden_dim, config.group_size
    ng, hg = n // g, h // g

    for k, (start, end) in enumerate(config.bands.boundaries):
        w2 = 2 * (end - start)
        p = f"band_split.band{k:02d}"
        out[f"{p}.norm.gamma"] = (w2,)
        out[f"{p}.norm.beta"] = (w2,)
        out[f"{p}.proj.weight"] = (n, w2)
        out[f"{p}.proj.bias"] = (n,)

    band_dirs = 2 if config.band_rnn_bidirectional else 1
    time_dirs = 1 if config.time_rnn_causal else 2
    for layer in range(1, config.num_layers + 1):
        for sub, dirs in (("band", band_dirs), ("time", time_dirs)):
            p = f"layer{layer}.{sub}"
            out[f"{p}.norm.gamma"] = (n,)
            out[f"{p}.norm.beta"] = (n,)
            for j in range(g):
                for d in ("fwd", "bwd")[:dirs]:
                    q = f"{p}.group{j}.{d}"
                    out[f"{q}.w_input"] = (4 * hg, ng)
                    out[f"{q}.w_hidden"] = (4 * hg, hg)
                    out[f"{q}.bias"] = (4 * hg,)
            out[f"{p}.proj.weight"] = (n, dirs * h)
            out[f"{p}.proj.bias"] = (n,)

    hidden = config.mask_hidden_dim
    for k, (start, end) in enumerate(config.bands.boundaries):
        w2 = 2 * (end - start)
        p = f"mask_head.band{k:02d}"
        out[f"{p}.norm.gamma"] = (n,)
        out[f"{p}.norm.beta"] = (n,)
        out[f"{p}.fc1.weight"] = (hidden, n)
        out[f"{p}.fc1.bias"] = (hidden,)
        out[f"{p}.fc2.weight"] = (w2, hidden)
        out[f"{p}.fc2.bias"] = (w2,)
    return out


@dataclass(frozen=True)
class ModelWeights:
    band_split: BandSplitWeights
    band_layers: tuple
    time_layers: tuple
    mask_head: MaskHeadWeights


def weights_from_arrays(config: ModelConfig, arrays: Mapping) -> ModelWeights:
    """Assemble structured weights from a flat name -> array mapping.

    Every expected tensor must be present with the expected shape; unknown
    names are rejected. Arrays are upcast to float64 for computation.
    """
    expected = expected_tensors(config)
    for name in expected:
        if name not in arrays:
            raise WeightsFormatError(f"missing tensor {name}")
    extras = sorted(set(arrays) - set(expected))
    if extras:
        raise WeightsFormatError(
            f"{len(extras)} unexpected tensors, first: {extras[0]}"
        )

    tensors = {}
    for name, shape in expected.items():
        a = np.asarray(arrays[name])
        if a.shape != shape:
            raise WeightsFormatError(
                f"tensor {name} has shape {a.shape}, expected {shape}"
            )
        tensors[name] = a.astype(np.float64)

    def cell(prefix: str) -> LstmWeights:
        return LstmWeights(
            w_input=tensors[f"{prefix}.w_input"],
            w_hidden=tensors[f"{prefix}.w_hidden"],
            bias=tensors[f"{prefix}.bias"],
        )

    def grouped(prefix: str, dirs: int) -> GroupedLayerWeights:
        g = config.group_size
        fwd = tuple(cell(f"{prefix}.group{j}.fwd") for j in range(g))
        bwd = tuple(cell(f"{prefix}.group{j}.bwd") for j in range(g)) if dirs == 2 else None
        return GroupedLayerWeights(
            norm_gamma=tensors[f"{prefix}.norm.gamma"],
            norm_beta=tensors[f"{prefix}.norm.beta"],
            forward_cells=fwd,
            backward_cells=bwd,
            proj_weight=tensors[f"{prefix}.proj.weight"],
            proj_bias=tensors[f"{prefix}.proj.bias"],
        )

    split = BandSplitWeights(
        tuple(
            BandProjection(
                norm_gamma=tensors[f"band_split.band{k:02d}.norm.gamma"],
                norm_beta=tensors[f"band_split.band{k:02d}.norm.beta"],
                weight=tensors[f"band_split.band{k:02d}.proj.weight"],
                bias=tensors[f"band_split.band{k:02d}.proj.bias"],
            )
            for k in range(config.num_bands)
        )
    )
    band_dirs = 2 if config.band_rnn_bidirectional else 1
    time_dirs = 1 if config.time_rnn_causal else 2
    band_layers = tuple(
        grouped(f"layer{l}.band", band_dirs) for l in range(1, config.num_layers + 1)
    )
    time_layers = tuple(
        grouped(f"layer{l}.time", time_dirs) for l in range(1, config.num_layers + 1)
    )
    head = MaskHeadWeights(
        tuple(
            MaskBandHead(
                norm_gamma=tensors[f"mask_head.band{k:02d}.norm.gamma"],
                norm_beta=tensors[f"mask_head.band{k:02d}.norm.beta"],
                fc1_weight=tensors[f"mask_head.band{k:02d}.fc1.weight"],
                fc1_bias=tensors[f"mask_head.band{k:02d}.fc1.bias"],
                fc2_weight=tensors[f"mask_head.band{k:02d}.fc2.weight"],
                fc2_bias=tensors[f"mask_head.band{k:02d}.fc2.bias"],
            )
            for k in range(config.num_bands)
        )
    )
    return ModelWeights(split, band_layers, time_layers, head)


@dataclass(frozen=True)
class Model:
    """Immutable handle pairing a config with assembled weights and plans."""

    config: ModelConfig
    weights: ModelWeights
    resample_plan: tuple
    prune_counts: tuple


def build(config: ModelConfig, weights) -> Model:
    """Assemble a runnable model; ``weights`` is a ModelWeights or flat mapping."""
    if not isinstance(weights, ModelWeights):
        weights = weights_from_arrays(config, weights)
    if len(weights.band_layers) != config.num_layers or len(weights.time_layers) != config.num_layers:
        raise WeightsFormatError(
            f"weights carry {len(weights.band_layers)}/{len(weights.time_layers)} "
            f"band/time layers, config wants {config.num_layers}"
        )
    plan = plan_resampling(config.resample, config.num_layers)
    counts = prune_schedule(config.prune, config.num_layers, config.num_bands)
    return Model(config, weights, plan, counts)


def _band_core(x, w: GroupedLayerWeights, tally, component):
    """Band-RNN core on [K x T' x N]: sequences run across K, batched over T'."""
    xn = layer_norm(x, w.norm_gamma, w.norm_beta)
    seqs = xn.transpose(1, 0, 2)
    h = grouped_forward_batch(seqs, w, tally, component)
    out = dense(h, w.proj_weight, w.proj_bias, tally, component)
    return out.transpose(1, 0, 2)


def _time_core(x, w: GroupedLayerWeights, tally, component):
    """Time-RNN core on [K' x T' x N]: sequences run across T', batched over K'."""
    xn = layer_norm(x, w.norm_gamma, w.norm_beta)
    h = grouped_forward_batch(xn, w, tally, component)
    return dense(h, w.proj_weight, w.proj_bias, tally, component)


def forward_features(model: Model, features: np.ndarray, tally=None, probe=None) -> np.ndarray:
    """Run the dual-path layer stack on ``[K x T x N]`` features.

    ``probe``, when given, is called as ``probe(stage, layer, array)`` with
    stages ``band_in/band_out/time_in/time_out`` around each sublayer and
    ``time_active`` with the slice of bands about to enter the time RNN.
    Output shape always equals the input shape, whatever the resampling
    and pruning plans do internally.
    """
    cfg = model.config
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 3 or x.shape[0] != cfg.num_bands or x.shape[2] != cfg.feature_dim:
        raise ConfigError(
            f"features must be [{cfg.num_bands} x T x {cfg.feature_dim}], got {x.shape}"
        )

    def run_stack(y):
        for idx in range(cfg.num_layers):
            layer = idx + 1
            lp = model.resample_plan.layers[idx]
            bw = model.weights.band_layers[idx]
            tw = model.weights.time_layers[idx]
            comp_b = f"band_rnn[{layer}]"
            comp_t = f"time_rnn[{layer}]"

            if probe is not None:
                probe("band_in", layer, y)
            y = resampled_sublayer(
                y,
                lambda z: _band_core(z, bw, tally, comp_b),
                lp.factor if lp.band_resampled else 1,
            )
            if probe is not None:
                probe("band_out", layer, y)

            skip = model.prune_counts[idx]
            if probe is not None:
                probe("time_in", layer, y)
                probe("time_active", layer, y[: y.shape[0] - skip])
            y = apply_pruned_time_rnn(
                y,
                lambda z: resampled_sublayer(
                    z,
                    lambda q: _time_core(q, tw, tally, comp_t),
                    lp.factor if lp.time_resampled else 1,
                ),
                skip,
            )
            if probe is not None:
                probe("time_out", layer, y)
        return y

    if model.resample_plan.pps_factor > 1:
        return pps_wrap(x, model.resample_plan.pps_factor, run_stack)
    return run_stack(x)


def enhance(model: Model, noisy: np.ndarray, oa: OaConfig | None = None) -> np.ndarray:
    """Enhance a mono waveform; output has exactly the input's length.

    With observation adding, the output is the configured convex mix of
    the noisy input and the enhanced signal.
    """
    noisy = np.asarray(noisy)
    cfg = model.config
    spec = stft(noisy, cfg.stft)
    feats = band_split(spec, model.weights.band_split, cfg.bands)
    feats = forward_features(model, feats)
    mask = estimate_mask(feats, model.weights.mask_head, cfg.bands)
    out = istft(apply_mask(spec, mask), cfg.stft, noisy.size)
    if oa is not None:
        out = observation_add(noisy, out, oa)
    return out
