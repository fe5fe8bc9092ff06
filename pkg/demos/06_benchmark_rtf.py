"""Wall-clock timing of the full pipeline against its analytic cost.

Real-time factor below 1.0 means the enhancer keeps up with live audio
on this machine. Effective GMAC/s (analytic MACs divided by measured
seconds) says how hard the numpy kernels drive the CPU.
"""

import time

import numpy as np

from bsrnnlite import analyze, build, canonical_config, enhance, gen_weights

SECONDS = 4.0
RUNS = 3

cfg = canonical_config()
model = build(cfg, gen_weights(cfg, seed=0))
rng = np.random.default_rng(0)
noisy = (rng.standard_normal(int(SECONDS * cfg.stft.sample_rate)) * 0.1
         ).astype(np.float32)

enhance(model, noisy)  # warm-up pass
times = []
for _ in range(RUNS):
    t0 = time.perf_counter()
    enhance(model, noisy)
    times.append(time.perf_counter() - t0)
wall = sorted(times)[len(times) // 2]

report = analyze(cfg, SECONDS)
print(f"audio        {SECONDS:g} s at {cfg.stft.sample_rate} Hz")
print(f"wall         {wall:.3f} s (median of {RUNS})")
print(f"rtf          {wall / SECONDS:.3f}")
print(f"analytic     {report.gps:.2f} G/s")
print(f"throughput   {report.total / wall / 1e9:.2f} GMAC/s effective")
