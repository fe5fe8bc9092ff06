"""Walk one buffer of audio through every stage of the enhancer.

The model here carries seeded random weights, so the "enhanced" output is
an arbitrary spectral reshaping rather than an actual denoising. What the
walkthrough shows is the mechanics: the shapes each stage produces, the
masking step, and the exact length round trip from waveform to waveform.
"""

import numpy as np

from bsrnnlite import (
    OaConfig,
    apply_mask,
    band_split,
    build,
    canonical_config,
    enhance,
    estimate_mask,
    forward_features,
    gen_weights,
    istft,
    observation_add,
    stft,
)


def main():
    cfg = canonical_config()
    model = build(cfg, gen_weights(cfg, seed=0))
    print(f"model: {cfg.name}, {cfg.num_bands} bands, {cfg.num_layers} layers, "
          f"N={cfg.feature_dim}, H={cfg.hidden_dim}")

    rng = np.random.default_rng(0)
    t = np.arange(cfg.stft.sample_rate, dtype=np.float32) / cfg.stft.sample_rate
    tone = 0.3 * np.sin(2 * np.pi * 440.0 * t).astype(np.float32)
    noisy = tone + 0.1 * rng.standard_normal(t.size).astype(np.float32)
    print(f"input: {noisy.size} samples at {cfg.stft.sample_rate} Hz")

    spec = stft(noisy, cfg.stft)
    print(f"stft: {spec.shape[0]} bins x {spec.shape[1]} frames, {spec.dtype}")

    feats = band_split(spec, model.weights.band_split, cfg.bands)
    print(f"band split: {feats.shape} (bands x frames x features)")

    feats = forward_features(model, feats)
    print(f"layer stack: {feats.shape} (shape preserved by design)")

    mask = estimate_mask(feats, model.weights.mask_head, cfg.bands)
    print(f"mask: {mask.shape}, magnitude range "
          f"[{np.abs(mask).min():.3f}, {np.abs(mask).max():.3f}]")

    out = istft(apply_mask(spec, mask), cfg.stft, noisy.size)
    print(f"istft: {out.size} samples, {out.dtype}")

    mixed = observation_add(noisy, out, OaConfig(0.2))
    one_call = enhance(model, noisy, oa=OaConfig(0.2))
    print("observation adding at omega=0.2 keeps a fifth of the input")
    print(f"stagewise result == enhance(): {np.array_equal(mixed, one_call)}")
    print(f"energy in/out: {np.sum(noisy ** 2):.2f} / {np.sum(mixed ** 2):.2f}")


if __name__ == "__main__":
    main()
