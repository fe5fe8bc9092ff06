"""JSON serialization of model configurations.

The document mirrors ModelConfig field by field:

    {
      "name": "canonical-v1",
      "stft": {"sample_rate": 16000, "fft_size": 512, "hop_size": 256,
               "window": "hann"},
      "bands": [[0, 4], [4, 8], ...],
      "feature_dim": 126,
      "hidden_dim": 72,
      "num_layers": 6,
      "group_size": 1,
      "lwr": {"kind": "none"},            # or {"kind": "async", "factor": 16},
                                          # {"kind": "sync", "factor": 4,
                                          #  "target_layers": [1, 3, 5]}, ...
      "sbp": {"kind": "none"},            # or {"kind": "aggressive",
                                          #  "skip_bands": 6},
                                          # {"kind": "progressive"}
      "time_rnn_causal": true,
      "band_rnn_bidirectional": true,
      "mask_hidden_ratio": 4
    }

Every field except "stft", "bands", "feature_dim", "hidden_dim", and
"num_layers" may be omitted and takes the ModelConfig default.
"""

from __future__ import annotations

import json
from pathlib import Path

from .bands import BandConfig
from .dsp import StftConfig
from .errors import ConfigError
from .model import ModelConfig, preset_config, preset_names
from .prune import SbpStrategy
from .resample import LwrStrategy


def config_to_dict(config: ModelConfig) -> dict:
    lwr: dict = {"kind": config.resample.kind}
    if config.resample.kind != "none":
        lwr["factor"] = config.resample.factor
    if config.resample.target_layers is not None:
        lwr["target_layers"] = list(config.resample.target_layers)
    sbp: dict = {"kind": config.prune.kind}
    if config.prune.skip_bands is not None:
        sbp["skip_bands"] = config.prune.skip_bands
    return {
        "name": config.name,
        "stft": {
            "sample_rate": config.stft.sample_rate,
            "fft_size": config.stft.fft_size,
            "hop_size": config.stft.hop_size,
            "window": config.stft.window,
        },
        "bands": [list(b) for b in config.bands.boundaries],
        "feature_dim": config.feature_dim,
        "hidden_dim": config.hidden_dim,
        "num_layers": config.num_layers,
        "group_size": config.group_size,
        "lwr": lwr,
        "sbp": sbp,
        "time_rnn_causal": config.time_rnn_causal,
        "band_rnn_bidirectional": config.band_rnn_bidirectional,
        "mask_hidden_ratio": config.mask_hidden_ratio,
    }


def _require(doc: dict, key: str, kind, source: str):
    if key not in doc:
        raise ConfigError(f"{source}: missing required field {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ConfigError(f"{source}: field {key!r} must be {kind.__name__}, got {value!r}")
    return value


def config_from_dict(doc: dict, source: str = "<config>") -> ModelConfig:
    """Parse and validate a configuration document.

    Raises ConfigError naming ``source`` and the offending field for any
    structural problem; ModelConfig's own validation covers the rest.
    """
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: top level must be an object")
    stft_doc = _require(doc, "stft", dict, source)
    stft = StftConfig(
        sample_rate=_require(stft_doc, "sample_rate", int, f"{source}: stft"),
        fft_size=_require(stft_doc, "fft_size", int, f"{source}: stft"),
        hop_size=_require(stft_doc, "hop_size", int, f"{source}: stft"),
        window=stft_doc.get("window", "hann"),
    )
    bands_doc = _require(doc, "bands", list, source)
    try:
        bounds = tuple((int(a), int(b)) for a, b in bands_doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: bands must be [start, end] pairs: {exc}") from exc
    bands = BandConfig(bounds)

    lwr_doc = doc.get("lwr", {"kind": "none"})
    if not isinstance(lwr_doc, dict) or "kind" not in lwr_doc:
        raise ConfigError(f"{source}: lwr must be an object with a 'kind'")
    targets = lwr_doc.get("target_layers")
    resample = LwrStrategy(
        kind=lwr_doc["kind"],
        factor=lwr_doc.get("factor", 1),
        target_layers=None if targets is None else tuple(int(t) for t in targets),
    )
    sbp_doc = doc.get("sbp", {"kind": "none"})
    if not isinstance(sbp_doc, dict) or "kind" not in sbp_doc:
        raise ConfigError(f"{source}: sbp must be an object with a 'kind'")
    skip = sbp_doc.get("skip_bands")
    prune = SbpStrategy(kind=sbp_doc["kind"], skip_bands=None if skip is None else int(skip))

    return ModelConfig(
        stft=stft,
        bands=bands,
        feature_dim=_require(doc, "feature_dim", int, source),
        hidden_dim=_require(doc, "hidden_dim", int, source),
        num_layers=_require(doc, "num_layers", int, source),
        group_size=doc.get("group_size", 1),
        resample=resample,
        prune=prune,
        time_rnn_causal=doc.get("time_rnn_causal", True),
        band_rnn_bidirectional=doc.get("band_rnn_bidirectional", True),
        mask_hidden_ratio=doc.get("mask_hidden_ratio", 4),
        name=doc.get("name", ""),
    )


def load_config(spec: str | Path) -> ModelConfig:
    """Resolve a preset name or read a JSON config file."""
    if isinstance(spec, str) and spec in preset_names():
        return preset_config(spec)
    path = Path(spec)
    if not path.exists():
        raise ConfigError(
            f"{spec!r} is neither a preset ({', '.join(preset_names())}) nor a file"
        )
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(doc, source=str(path))


def save_config(config: ModelConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
