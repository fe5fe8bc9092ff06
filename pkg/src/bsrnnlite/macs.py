"""Computational cost accounting in multiply-accumulates (MACs).

Two independent routes produce the same numbers:

* :func:`analyze` / :func:`analyze_frames` evaluate a closed-form count
  from the configuration alone;
* :func:`count_forward` runs the real forward pass with a tally attached
  to the two kernel call sites (LSTM matmuls, dense projections) and sums
  what actually executed.

The defining property, enforced by the test suite, is that the two agree
integer-exactly for any configuration. Keep them independent; never make
one call the other.

Counting conventions: a dense [I -> O] over R rows costs R*I*O; an LSTM
position costs dirs * 4 * g * ((I/g)(H/g) + (H/g)^2); biases,
activations, norms, resampling, masking, and the Fourier transforms are
free. G/s is total MACs over one second of input divided by 1e9.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .bands import apply_mask, band_split, estimate_mask
from .dsp import istft, stft
from .errors import ConfigError
from .model import Model, ModelConfig, canonical_config, forward_features
from .prune import SbpStrategy, prune_schedule
from .resample import LwrStrategy, plan_resampling, reduced_frames


class MacsTally:
    """Mutable per-component MAC counter passed into kernel call sites."""

    def __init__(self) -> None:
        self.counts: dict = {}

    def add(self, component: str, macs: int) -> None:
        self.counts[component] = self.counts.get(component, 0) + int(macs)


@dataclass(frozen=True)
class MacsReport:
    """Per-component MAC counts for one run or one analyzed duration."""

    components: dict
    duration: float

    @property
    def total(self) -> int:
        return sum(self.components.values())

    @property
    def gps(self) -> float:
        """Giga-MACs per second of input audio."""
        return self.total / (self.duration * 1e9)

    def to_dict(self) -> dict:
        return {
            "duration_seconds": self.duration,
            "total_macs": self.total,
            "gmacs_per_second": self.gps,
            "components": dict(self.components),
        }


def component_order(config: ModelConfig) -> tuple:
    """Report keys in pipeline order."""
    keys = ["band_split"]
    for layer in range(1, config.num_layers + 1):
        keys.append(f"band_rnn[{layer}]")
        keys.append(f"time_rnn[{layer}]")
    keys.append("mask_head")
    return tuple(keys)


def analyze_frames(config: ModelConfig, num_frames: int) -> dict:
    """Closed-form per-component MAC counts for ``num_frames`` input frames.

    All quantities are exact integers. The band-split and mask head always
    run at the full frame rate; the layer stack rate is reduced by a PPS
    factor; individual sublayer cores are further reduced per the
    resampling plan, and the time RNN sees only the unpruned bands.
    """
    if num_frames < 1:
        raise ConfigError(f"num_frames must be >= 1, got {num_frames}")
    t = num_frames
    k = config.num_bands
    n, h, g = config.feature_dim, config.hidden_dim, config.group_size
    ng, hg = n // g, h // g
    cell = 4 * (ng * hg + hg * hg)  # one position, one direction, one group
    widths = config.bands.widths
    band_dirs = 2 if config.band_rnn_bidirectional else 1
    time_dirs = 1 if config.time_rnn_causal else 2
    plan = plan_resampling(config.resample, config.num_layers)
    skips = prune_schedule(config.prune, config.num_layers, k)
    t_stack = reduced_frames(t, plan.pps_factor)

    comps: dict = {"band_split": sum(t * n * 2 * w for w in widths)}
    for idx in range(config.num_layers):
        layer = idx + 1
        lp = plan.layers[idx]
        tau_b = reduced_frames(t_stack, lp.factor) if lp.band_resampled else t_stack
        pos_b = tau_b * k
        comps[f"band_rnn[{layer}]"] = (
            band_dirs * g * pos_b * cell + pos_b * n * (band_dirs * h)
        )
        tau_t = reduced_frames(t_stack, lp.factor) if lp.time_resampled else t_stack
        pos_t = (k - skips[idx]) * tau_t
        comps[f"time_rnn[{layer}]"] = (
            time_dirs * g * pos_t * cell + pos_t * n * (time_dirs * h)
        )
    hidden = config.mask_hidden_dim
    comps["mask_head"] = sum(t * hidden * n + t * 2 * w * hidden for w in widths)
    return comps


def analyze(config: ModelConfig, duration: float = 1.0) -> MacsReport:
    """Closed-form cost of enhancing ``duration`` seconds of audio."""
    if duration <= 0:
        raise ConfigError(f"duration must be positive, got {duration}")
    num_samples = int(round(duration * config.stft.sample_rate))
    if num_samples < 1:
        raise ConfigError(f"duration {duration} shorter than one sample")
    comps = analyze_frames(config, config.stft.num_frames(num_samples))
    return MacsReport(comps, duration)


def count_forward(model: Model, x: np.ndarray) -> MacsReport:
    """Run the forward pass and tally every multiply-accumulate executed.

    ``x`` is either a mono waveform (the full pipeline runs, including the
    untallied transforms) or a ``[K x T x N]`` feature tensor. In feature
    mode the band-split stage did not literally run on anything, so the
    kernel is executed on a zero spectrogram of the matching [F x T] shape;
    counts depend on shapes only, which keeps the report comparable with
    :func:`analyze` in both modes.
    """
    cfg = model.config
    tally = MacsTally()
    x = np.asarray(x)
    if x.ndim == 1:
        spec = stft(x, cfg.stft)
        feats = band_split(spec, model.weights.band_split, cfg.bands, tally=tally)
        feats = forward_features(model, feats, tally=tally)
        mask = estimate_mask(feats, model.weights.mask_head, cfg.bands, tally=tally)
        istft(apply_mask(spec, mask), cfg.stft, x.size)
        duration = x.size / cfg.stft.sample_rate
    elif x.ndim == 3:
        t = x.shape[1]
        zero_spec = np.zeros((cfg.stft.frequency_bins, t), dtype=np.complex64)
        band_split(zero_spec, model.weights.band_split, cfg.bands, tally=tally)
        feats = forward_features(model, x, tally=tally)
        estimate_mask(feats, model.weights.mask_head, cfg.bands, tally=tally)
        duration = t * cfg.stft.hop_size / cfg.stft.sample_rate
    else:
        raise ConfigError(f"input must be a waveform or [K x T x N] features, got shape {x.shape}")

    leftover = set(tally.counts) - set(component_order(cfg))
    if leftover:
        raise ConfigError(f"tally recorded unknown components: {sorted(leftover)}")
    comps = {name: tally.counts.get(name, 0) for name in component_order(cfg)}
    return MacsReport(comps, duration)


#: Cost targets (G/s on one second of 16 kHz audio) that the canonical
#: dims were calibrated against; the analyzer lands within a few
#: hundredths of each. Keys match :func:`canonical_chain` labels.
REFERENCE_GPS = {
    "BSRNN": 1.84,
    "+GR": 1.09,
    "+LWR-PPS(4)": 0.55,
    "+LWR-ALL(4)": 0.55,
    "+LWR-SYNC(4)": 1.19,
    "+LWR-ASYNC(4)": 1.19,
    "+LWR-ASYNC(16)": 1.03,
    "++SBP-A": 0.96,
    "++SBP-P": 0.99,
    "+++GR": 0.62,
}


def canonical_chain(extended: bool = False):
    """The canonical baseline and its optimization variants.

    Returns ``(base_config, [(label, config), ...])``. Rows are not
    cumulative left to right: every LWR row modifies the ungrouped
    baseline, the SBP rows build on LWR-ASYNC(16), and only the final
    row adds grouping on top of everything.
    """
    base = canonical_config().with_groups(1, "BSRNN")
    lwr16 = base.with_resample(LwrStrategy.alternating(16), "+LWR-ASYNC(16)")
    sbpp = lwr16.with_prune(SbpStrategy.progressive(), "++SBP-P")
    grouped = ("+GR", base.with_groups(2, "+GR"))
    tail = [
        ("+LWR-ASYNC(16)", lwr16),
        ("++SBP-P", sbpp),
        ("+++GR", sbpp.with_groups(2, "+++GR")),
    ]
    if not extended:
        return base, [grouped] + tail
    variants = [
        grouped,
        ("+LWR-PPS(4)", base.with_resample(LwrStrategy.pps(4), "+LWR-PPS(4)")),
        ("+LWR-ALL(4)", base.with_resample(LwrStrategy.all_layers(4), "+LWR-ALL(4)")),
        ("+LWR-SYNC(4)", base.with_resample(LwrStrategy.sync(4), "+LWR-SYNC(4)")),
        ("+LWR-ASYNC(4)", base.with_resample(LwrStrategy.alternating(4), "+LWR-ASYNC(4)")),
        tail[0],
        ("++SBP-A", lwr16.with_prune(SbpStrategy.aggressive(), "++SBP-A")),
        tail[1],
        tail[2],
    ]
    return base, variants


@dataclass(frozen=True)
class ReductionRow:
    name: str
    total_macs: int
    gps: float
    reduction_pct: float


@dataclass(frozen=True)
class ReductionTable:
    duration: float
    rows: tuple

    def to_text(self) -> str:
        width = max(len(r.name) for r in self.rows)
        lines = [f"{'variant'.ljust(width)}   {'G/s':>7}   {'reduction':>9}"]
        for r in self.rows:
            lines.append(f"{r.name.ljust(width)}   {r.gps:7.2f}   {r.reduction_pct:8.1f}%")
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["variant,total_macs,gmacs_per_second,reduction_pct"]
        for r in self.rows:
            lines.append(f"{r.name},{r.total_macs},{r.gps:.6f},{r.reduction_pct:.3f}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "duration_seconds": self.duration,
                "rows": [dataclasses.asdict(r) for r in self.rows],
            },
            indent=2,
        )


def reduction_table(base: ModelConfig, variants, duration: float = 1.0) -> ReductionTable:
    """Cost of each variant next to the base, with percent reduction.

    All variants must share the base's STFT configuration so the G/s
    figures are computed over identical frame counts.
    """
    for name, cfg in variants:
        if cfg.stft != base.stft:
            raise ConfigError(f"variant {name!r} does not share the base STFT configuration")
    base_report = analyze(base, duration)
    rows = [ReductionRow(base.name or "base", base_report.total, base_report.gps, 0.0)]
    for name, cfg in variants:
        rep = analyze(cfg, duration)
        rows.append(
            ReductionRow(name, rep.total, rep.gps, 100.0 * (1.0 - rep.total / base_report.total))
        )
    return ReductionTable(duration, tuple(rows))


@dataclass(frozen=True)
class CalibrationResult:
    feature_dim: int
    hidden_dim: int
    base_gps: float
    grouped_gps: float
    residual: float


def calibrate_feature_dims(
    target_base: float = REFERENCE_GPS["BSRNN"],
    target_grouped: float = REFERENCE_GPS["+GR"],
    group: int = 2,
    dim_min: int = 8,
    dim_max: int = 240,
    step: int = 2,
    duration: float = 1.0,
    top: int = 5,
):
    """Grid-search (feature_dim, hidden_dim) against the two cost targets.

    Scores each candidate by the worse of its two absolute G/s residuals
    (ungrouped baseline vs target_base, ``group``-grouped vs
    target_grouped) and returns the ``top`` best as CalibrationResult,
    best first. This is how the canonical dims were frozen.
    """
    if step < 1 or dim_min < group or dim_max < dim_min:
        raise ConfigError(f"bad search grid [{dim_min}, {dim_max}] step {step}")
    template = canonical_config()
    results = []
    for n in range(dim_min, dim_max + 1, step):
        if n % group:
            continue
        for h in range(dim_min, dim_max + 1, step):
            if h % group:
                continue
            cfg = dataclasses.replace(template, feature_dim=n, hidden_dim=h, group_size=1)
            base_gps = analyze(cfg, duration).gps
            grouped_gps = analyze(dataclasses.replace(cfg, group_size=group), duration).gps
            residual = max(abs(base_gps - target_base), abs(grouped_gps - target_grouped))
            results.append(CalibrationResult(n, h, base_gps, grouped_gps, residual))
    results.sort(key=lambda r: (r.residual, r.feature_dim, r.hidden_dim))
    return results[:top]
