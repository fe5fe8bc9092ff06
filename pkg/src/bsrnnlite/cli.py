"""Command-line front end.

Subcommands:
    enhance      denoise a wav file (or every wav in a directory)
    analyze      closed-form MACs report for a configuration
    table        cost comparison of optimization variants vs a base
    gen-weights  write a deterministic seeded weights file
    bench        wall-clock timing of the real forward pass
    calibrate    grid-search feature/hidden dims against the cost targets

Exit codes: 0 success, 1 internal error, 2 audio format, 3 weights
format, 4 configuration, 5 file I/O, 64 usage. Diagnostics are a single
``error: <category>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import configio, macs, wavio, weights_io
from .dsp import OaConfig
from .errors import AudioFormatError, BsrnnLiteError, ConfigError, WeightsFormatError
from .model import build, preset_names

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_AUDIO = 2
EXIT_WEIGHTS = 3
EXIT_CONFIG = 4
EXIT_IO = 5
EXIT_USAGE = 64


def _load_model(config_spec: str, weights_path: str):
    config = configio.load_config(config_spec)
    arrays, _meta = weights_io.load_weights(weights_path)
    return config, build(config, arrays)


def _enhance_one(model, src: Path, dst: Path, oa: OaConfig | None) -> None:
    samples, rate, fmt = wavio.read_wav(src)
    expected = model.config.stft.sample_rate
    if rate != expected:
        raise AudioFormatError(f"{src}: sample rate {rate}, model expects {expected}")
    from .model import enhance  # local import keeps module load light

    out = enhance(model, samples, oa=oa)
    wavio.write_wav(dst, out, rate, fmt)


def cmd_enhance(args) -> int:
    config, model = _load_model(args.config, args.weights)
    oa = None if args.oa is None else OaConfig(args.oa)
    src = Path(args.input)
    dst = Path(args.output)
    if src.is_dir():
        wavs = sorted(src.glob("*.wav"))
        if not wavs:
            raise AudioFormatError(f"no wav files in {src}")
        dst.mkdir(parents=True, exist_ok=True)
        for wav in wavs:
            _enhance_one(model, wav, dst / wav.name, oa)
            print(f"{wav.name}: ok")
    else:
        _enhance_one(model, src, dst, oa)
        print(f"{dst}: ok")
    return EXIT_OK


def cmd_analyze(args) -> int:
    config = configio.load_config(args.config)
    report = macs.analyze(config, args.duration)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    elif args.csv:
        print("component,macs")
        for name, count in report.components.items():
            print(f"{name},{count}")
        print(f"total,{report.total}")
    else:
        print(f"{report.gps:.2f} G/s")
        print(f"total {report.total} MACs over {report.duration:g} s")
        for name, count in report.components.items():
            print(f"  {name:>14} {count:>15} ({100.0 * count / report.total:5.1f}%)")
    return EXIT_OK


def _variant_list(args):
    if args.variants is None:
        base, variants = macs.canonical_chain(extended=args.extended)
        if args.base is not None:
            base = configio.load_config(args.base)
        return base, variants
    base = configio.load_config(args.base) if args.base else macs.canonical_chain()[0]
    vdir = Path(args.variants)
    if not vdir.is_dir():
        raise ConfigError(f"--variants {vdir} is not a directory")
    files = sorted(vdir.glob("*.json"))
    if not files:
        raise ConfigError(f"no *.json configs in {vdir}")
    return base, [(f.stem, configio.load_config(f)) for f in files]


def cmd_table(args) -> int:
    base, variants = _variant_list(args)
    table = macs.reduction_table(base, variants, args.duration)
    if args.json:
        print(table.to_json())
    elif args.csv:
        print(table.to_csv())
    else:
        print(table.to_text())
    return EXIT_OK


def cmd_gen_weights(args) -> int:
    config = configio.load_config(args.config)
    arrays = weights_io.gen_weights(config, args.seed)
    meta = {"config_name": config.name, "seed": args.seed}
    weights_io.save_weights(args.output, arrays, meta)
    total = sum(a.size for a in arrays.values())
    print(f"{args.output}: {len(arrays)} tensors, {total} parameters, seed {args.seed}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.seconds <= 0:
        raise ConfigError(f"--seconds must be positive, got {args.seconds}")
    config = configio.load_config(args.config)
    if args.weights is not None:
        arrays, _meta = weights_io.load_weights(args.weights)
    else:
        arrays = weights_io.gen_weights(config, seed=0)
    model = build(config, arrays)
    from .model import enhance

    rng = np.random.default_rng(0)
    n = int(round(args.seconds * config.stft.sample_rate))
    noisy = rng.standard_normal(n).astype(np.float32) * np.float32(0.1)
    enhance(model, noisy)  # warm-up
    times = []
    for _ in range(args.runs):
        t0 = time.perf_counter()
        enhance(model, noisy)
        times.append(time.perf_counter() - t0)
    wall = sorted(times)[len(times) // 2]
    report = macs.analyze(config, args.seconds)
    print(f"audio      {args.seconds:g} s")
    print(f"wall       {wall:.3f} s (median of {args.runs})")
    print(f"rtf        {wall / args.seconds:.3f}")
    print(f"cost       {report.gps:.2f} G/s analyzed")
    print(f"throughput {report.total / wall / 1e9:.2f} GMAC/s effective")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    results = macs.calibrate_feature_dims(
        target_base=args.target_base,
        target_grouped=args.target_grouped,
        group=args.group,
        dim_min=args.dim_min,
        dim_max=args.dim_max,
        step=args.step,
        top=args.top,
    )
    print("feature_dim  hidden_dim  base_gps  grouped_gps  residual")
    for r in results:
        print(
            f"{r.feature_dim:>11}  {r.hidden_dim:>10}  {r.base_gps:8.4f}  "
            f"{r.grouped_gps:11.4f}  {r.residual:8.4f}"
        )
    best = results[0]
    print(f"best: feature_dim={best.feature_dim} hidden_dim={best.hidden_dim}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsrnnlite",
        description="Band-split RNN speech enhancement: inference and MACs accounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    presets = ", ".join(preset_names())

    p = sub.add_parser("enhance", help="denoise a wav file or directory")
    p.add_argument("--config", required=True, help=f"config JSON path or preset ({presets})")
    p.add_argument("--weights", required=True, help="BSRW weights file")
    p.add_argument("--input", "--in", dest="input", required=True, help="input wav or directory")
    p.add_argument("--output", "--out", dest="output", required=True, help="output wav or directory")
    p.add_argument("--oa", type=float, default=None, metavar="OMEGA",
                   help="observation adding: keep this share of the noisy input (0..1)")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("analyze", help="closed-form MACs report")
    p.add_argument("--config", required=True, help="config JSON path or preset")
    p.add_argument("--duration", type=float, default=1.0, help="audio seconds (default 1.0)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="cost table of variants vs a base config")
    p.add_argument("--base", default=None, help="base config (default: canonical baseline)")
    p.add_argument("--variants", default=None,
                   help="directory of *.json variant configs (default: built-in chain)")
    p.add_argument("--extended", action="store_true",
                   help="with the built-in chain, include every strategy row")
    p.add_argument("--duration", type=float, default=1.0)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("gen-weights", help="write a deterministic seeded weights file")
    p.add_argument("--config", required=True, help="config JSON path or preset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "--out", dest="output", required=True, help="output .bsrw path")
    p.set_defaults(func=cmd_gen_weights)

    p = sub.add_parser("bench", help="time the real forward pass")
    p.add_argument("--config", required=True, help="config JSON path or preset")
    p.add_argument("--weights", default=None, help="BSRW weights (default: seeded)")
    p.add_argument("--seconds", type=float, default=10.0)
    p.add_argument("--runs", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("calibrate", help="fit feature/hidden dims to the cost targets")
    p.add_argument("--target-base", type=float, default=macs.REFERENCE_GPS["BSRNN"])
    p.add_argument("--target-grouped", type=float, default=macs.REFERENCE_GPS["+GR"])
    p.add_argument("--group", type=int, default=2)
    p.add_argument("--dim-min", type=int, default=8)
    p.add_argument("--dim-max", type=int, default=240)
    p.add_argument("--step", type=int, default=2)
    p.add_argument("--top", type=int, default=5)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which collides with the audio
        # category; remap while preserving --help's clean exit.
        return EXIT_USAGE if exc.code == 2 else (exc.code or 0)
    try:
        return args.func(args)
    except AudioFormatError as exc:
        print(f"error: audio: {exc}", file=sys.stderr)
        return EXIT_AUDIO
    except WeightsFormatError as exc:
        print(f"error: weights: {exc}", file=sys.stderr)
        return EXIT_WEIGHTS
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    except BsrnnLiteError as exc:
        print(f"error: internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
