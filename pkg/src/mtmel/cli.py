"""Command-line front end.

Subcommands: ``features`` (WAV -> feature file), ``mix`` (WAV -> noisy
WAV), ``bench`` (timing report), ``verify`` (oracle suites).

Exit codes: 0 success; 1 verification checks failed; 2 usage or argument
errors; 3 I/O errors; 4 data or file-format errors.

Configuration precedence is flags > config file > preset defaults. The
config file (``--config`` or the ``MTMEL_CONFIG`` environment variable) is
a JSON object with any of the keys emitted by ``FeatureConfig.describe``.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import zlib
from pathlib import Path

from . import backend
from .audio import (
    AudioBuffer,
    NoiseMixSpec,
    crop_one_second,
    mix_noise,
    read_wav,
    write_wav,
)
from .bench import fit_linear, format_csv, time_feature_extraction
from .config import SETUPS, FeatureConfig, TransformMode
from .errors import MtmelError
from .featio import FORMATS, write_feature
from .pipeline import extract_features
from .testkit import SUITE_NAMES, run_suites, synthetic_chirp
from .windows import MULTITAPER_FAMILIES, WindowFamily, WindowKind

__all__ = ["main"]

CONFIG_ENV_VAR = "MTMEL_CONFIG"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4

_WINDOW_CHOICES = tuple(f.value for f in WindowFamily)
_CONFIG_KEYS = ("setup", "hop", "frame_len", "f_min", "f_max", "n_mels",
                "window", "kaiser_beta", "k", "transform")


def _parse_k_range(text: str) -> list[int]:
    """Parse ``--k`` values: a single count ``5`` or a range ``3..10``."""
    lo, sep, hi = text.partition("..")
    try:
        if sep:
            first, last = int(lo), int(hi)
        else:
            first = last = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected K or A..B, got {text!r}") from None
    if first < 1 or last < first:
        raise argparse.ArgumentTypeError(f"invalid K range {text!r}")
    return list(range(first, last + 1))


def _load_config_file(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"config file {path}: expected a JSON object")
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(
            f"config file {path}: unknown keys {sorted(unknown)}")
    return data


def _effective_config(args) -> FeatureConfig:
    """Merge preset, config file, and flags (flags win)."""
    file_cfg = _load_config_file(args.config)
    setup = args.setup or file_cfg.get("setup") or "A"
    merged = FeatureConfig.from_setup(setup).describe()
    for key in _CONFIG_KEYS[1:]:
        if key in file_cfg:
            merged[key] = file_cfg[key]
    flag_values = {
        "hop": args.hop, "frame_len": args.frame_len, "f_min": args.f_min,
        "f_max": args.f_max, "n_mels": args.n_mels, "window": args.window,
        "kaiser_beta": args.kaiser_beta, "k": args.k,
        "transform": args.transform,
    }
    for key, value in flag_values.items():
        if value is not None:
            merged[key] = value
    return FeatureConfig.from_describe(merged)


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="JSON",
                     help=f"config file (default: ${CONFIG_ENV_VAR})")
    sub.add_argument("--setup", choices=sorted(SETUPS),
                     help="parameter preset (default A)")
    sub.add_argument("--window", choices=_WINDOW_CHOICES)
    sub.add_argument("--kaiser-beta", type=float, dest="kaiser_beta")
    sub.add_argument("--k", type=int, help="taper count")
    sub.add_argument("--hop", type=int)
    sub.add_argument("--frame-len", type=int, dest="frame_len")
    sub.add_argument("--f-min", type=float, dest="f_min")
    sub.add_argument("--f-max", type=float, dest="f_max")
    sub.add_argument("--n-mels", type=int, dest="n_mels")
    sub.add_argument("--transform", choices=[m.value for m in TransformMode])


def _add_noise_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--snr", type=float, default=None, metavar="DB",
                     help="mix white Gaussian noise at this SNR (omit: no mixing)")
    sub.add_argument("--seed", type=int, default=0, help="noise seed")
    sub.add_argument("--threshold-ratio", type=float, default=0.1,
                     dest="threshold_ratio",
                     help="energy-crop onset threshold as a fraction of peak")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtmel",
        description="Multitaper-mel spectrogram feature extraction toolkit.")
    parser.add_argument("--backend", choices=backend.available_backends(),
                        help="force the spectrogram kernel implementation")
    commands = parser.add_subparsers(dest="command", required=True)

    feat = commands.add_parser(
        "features", help="extract a feature matrix from a WAV file")
    group = feat.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="WAV")
    group.add_argument("--input-dir", metavar="DIR", dest="input_dir")
    feat.add_argument("--output", metavar="PATH",
                      help="output file (single input)")
    feat.add_argument("--output-dir", metavar="DIR", dest="output_dir",
                      help="output directory (batch input)")
    feat.add_argument("--format", choices=FORMATS, default="bin")
    feat.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                      help="parallel workers in batch mode")
    _add_config_flags(feat)
    _add_noise_flags(feat)

    mix = commands.add_parser(
        "mix", help="crop to one second and mix calibrated noise")
    mix.add_argument("--input", required=True, metavar="WAV")
    mix.add_argument("--output", required=True, metavar="WAV")
    _add_noise_flags(mix)

    bench = commands.add_parser(
        "bench", help="time feature extraction across taper counts")
    bench.add_argument("--k", type=_parse_k_range, default="3..10",
                       help="taper count or range A..B (default 3..10)")
    bench.add_argument("--window", default="swce",
                       choices=_WINDOW_CHOICES + ("all",),
                       help="taper family, or 'all' for the multitaper families")
    bench.add_argument("--setup", choices=sorted(SETUPS), default="A")
    bench.add_argument("--reps", type=int, default=100)
    bench.add_argument("--amortize-tapers", action="store_true",
                       dest="amortize_tapers",
                       help="build tapers outside the timed region")
    bench.add_argument("--output", metavar="CSV", help="report path (default stdout)")

    verify = commands.add_parser(
        "verify", help="run independent verification oracles")
    verify.add_argument("--suite", action="append", required=True,
                        choices=SUITE_NAMES,
                        help="suite to run (repeatable)")
    verify.add_argument("--frames", type=int, default=10000,
                        help="Monte-Carlo frames for the variance suite")
    return parser


def _features_one(in_path, out_path, args, config) -> None:
    buf = crop_one_second(read_wav(in_path), args.threshold_ratio)
    if args.snr is not None:
        seed = args.seed
        if args.input_dir:
            # Per-file deterministic seed: base + CRC32 of the file name.
            seed = (args.seed + zlib.crc32(Path(in_path).name.encode())) % 2 ** 64
        buf = mix_noise(buf, NoiseMixSpec(snr_db=args.snr, seed=seed))
    write_feature(extract_features(buf, config), out_path, args.format)


def _cmd_features(args) -> int:
    config = _effective_config(args)
    if args.input:
        if args.output_dir or not args.output:
            raise ValueError("single-file mode needs --output (not --output-dir)")
        _features_one(args.input, args.output, args, config)
        return EXIT_OK
    if not args.output_dir:
        raise ValueError("batch mode needs --output-dir")
    in_dir = Path(args.input_dir)
    wavs = sorted(p for p in in_dir.iterdir() if p.suffix.lower() == ".wav")
    if not wavs:
        raise ValueError(f"no .wav files in {in_dir}")
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = max(1, args.jobs)
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_features_one, wav,
                        out_dir / f"{wav.stem}.{args.format}", args, config)
            for wav in wavs
        ]
        for future in futures:
            future.result()
    return EXIT_OK


def _cmd_mix(args) -> int:
    buf = crop_one_second(read_wav(args.input), args.threshold_ratio)
    if args.snr is not None:
        buf = mix_noise(buf, NoiseMixSpec(snr_db=args.snr, seed=args.seed))
    write_wav(buf, args.output)
    return EXIT_OK


def _cmd_bench(args) -> int:
    k_values = args.k if isinstance(args.k, list) else _parse_k_range(args.k)
    families = ([f.value for f in MULTITAPER_FAMILIES]
                if args.window == "all" else [args.window])
    buf = AudioBuffer(samples=synthetic_chirp(), sample_rate=16000)
    records = []
    fits = {}
    for family in families:
        config = FeatureConfig.from_setup(
            args.setup, window=WindowKind(WindowFamily(family)))
        records.extend(time_feature_extraction(
            buf, config, k_values, reps=args.reps,
            amortize_tapers=args.amortize_tapers))
    fit_error = None
    try:
        for family in families:
            fits[family] = fit_linear(
                [r for r in records if r.window_kind.label == family])
    except ValueError as exc:
        fits, fit_error = {}, exc
    metadata = {
        "backend": backend.active_backend(),
        "setup": args.setup,
        "reps": args.reps,
        "timed_region": ("spectrogram+mel (tapers amortized)"
                         if args.amortize_tapers
                         else "tapers+spectrogram+mel (cold path)"),
    }
    report = format_csv(records, fits=fits, metadata=metadata)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    if fit_error is not None:
        print(f"mtmel: error: {fit_error}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suites(args.suite, n_frames=args.frames)
    width = max(len(r.name) for r in results)
    for r in results:
        print(json.dumps(r.as_json(), sort_keys=True))
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.suite:<15} {r.name:<{width}} {status}  {r.detail}",
              file=sys.stderr)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed",
          file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        backend.set_backend(args.backend)
    handlers = {"features": _cmd_features, "mix": _cmd_mix,
                "bench": _cmd_bench, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except MtmelError as exc:
        print(f"mtmel: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"mtmel: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"mtmel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
