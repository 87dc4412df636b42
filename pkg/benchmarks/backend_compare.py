"""Compare the compiled and pure-numpy spectrogram kernels.

Runs the same feature-extraction benchmark once per available backend and
prints a side-by-side table plus the speedup. Usage:

    python benchmarks/backend_compare.py [--setup A] [--k 3..10] [--reps 50]
"""

from __future__ import annotations

import argparse

from mtmel import AudioBuffer, FeatureConfig, WindowFamily, WindowKind
from mtmel.backend import available_backends, set_backend
from mtmel.bench import fit_linear, time_feature_extraction
from mtmel.cli import _parse_k_range
from mtmel.testkit import synthetic_chirp


def run(setup: str, k_values, reps: int, window: str):
    buf = AudioBuffer(samples=synthetic_chirp(), sample_rate=16000)
    config = FeatureConfig.from_setup(
        setup, window=WindowKind(WindowFamily(window)))
    results = {}
    for name in available_backends():
        set_backend(name)
        records = time_feature_extraction(buf, config, k_values, reps=reps,
                                          amortize_tapers=True)
        results[name] = records
        set_backend(None)
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--setup", default="A")
    parser.add_argument("--k", type=_parse_k_range, default="3..10")
    parser.add_argument("--reps", type=int, default=50)
    parser.add_argument("--window", default="swce")
    args = parser.parse_args(argv)

    results = run(args.setup, args.k, args.reps, args.window)
    names = list(results)
    print(f"setup {args.setup}, window {args.window}, reps {args.reps}, "
          f"timed region: spectrogram+mel (tapers amortized)")
    header = "k    " + "".join(f"{name + ' ms':>14}" for name in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for idx, k in enumerate(args.k):
        row = f"{k:<5}"
        means = [results[name][idx].mean_ms for name in names]
        row += "".join(f"{mean:>14.3f}" for mean in means)
        if len(names) == 2:
            row += f"{means[1] / means[0]:>9.2f}x" if means[0] else ""
        print(row)
    for name in names:
        fit = fit_linear(results[name])
        print(f"{name}: slope {fit.slope:.4f} ms/taper, intercept "
              f"{fit.intercept:.4f} ms, R^2 {fit.r_squared:.4f}")
    if len(names) < 2:
        print("note: compiled backend unavailable; only the pure kernel ran")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
