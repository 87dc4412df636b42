"""Wall-time measurement of feature extraction as a function of K.

The timed region is the full cold path by default: taper construction,
spectrogram, and mel projection for one buffer. With ``amortize_tapers``
the tapers are built once outside the loop, isolating the per-frame cost.
Either way the expected cost is affine in the taper count, which
:func:`fit_linear` quantifies with an ordinary least-squares fit.
"""

from __future__ import annotations

import contextlib
import math
import os
import statistics
import time
from dataclasses import dataclass, replace

from .audio import AudioBuffer
from .config import FeatureConfig
from .melfeat import build_mel_filterbank
from .pipeline import extract_features
from .windows import WindowKind, make_tapers

__all__ = [
    "LinearFit",
    "TimingRecord",
    "fit_linear",
    "format_csv",
    "time_feature_extraction",
]

MIN_REPS = 10
WARMUP_RUNS = 3
CSV_COLUMNS = ("window", "setup", "k", "mean_ms", "std_ms", "reps")


@dataclass(frozen=True)
class TimingRecord:
    """Mean and spread of the feature-extraction wall time for one K."""

    k: int
    window_kind: WindowKind
    setup_name: str
    mean_ms: float
    std_ms: float
    reps: int

    def __post_init__(self) -> None:
        if not self.mean_ms > 0.0:
            raise ValueError(f"mean_ms must be positive, got {self.mean_ms}")
        if not math.isfinite(self.std_ms) or self.std_ms < 0.0:
            raise ValueError(f"std_ms must be finite and >= 0, got {self.std_ms}")
        if self.reps < MIN_REPS:
            raise ValueError("reps below minimum")


@dataclass(frozen=True)
class LinearFit:
    """OLS fit of mean time on taper count."""

    slope: float
    intercept: float
    r_squared: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError(f"r_squared must be in [0, 1], got {self.r_squared}")


@contextlib.contextmanager
def _pinned_to_one_cpu():
    """Pin the process to a single logical CPU where the platform allows.

    Keeps the scheduler from migrating the timed region between cores.
    Restored on exit; silently a no-op where unsupported.
    """
    if not hasattr(os, "sched_setaffinity"):
        yield False
        return
    try:
        original = os.sched_getaffinity(0)
        os.sched_setaffinity(0, {min(original)})
    except OSError:
        yield False
        return
    try:
        yield True
    finally:
        with contextlib.suppress(OSError):
            os.sched_setaffinity(0, original)


def time_feature_extraction(x: AudioBuffer, config: FeatureConfig,
                            k_values, reps: int = 100, *,
                            warmup: int = WARMUP_RUNS,
                            amortize_tapers: bool = False,
                            pin_cpu: bool = True) -> list[TimingRecord]:
    """Time the taper -> spectrogram -> mel pipeline for each taper count.

    Runs ``warmup`` untimed iterations and then ``reps`` timed ones per K
    on a monotonic clock, single-threaded and pinned to one CPU when the
    platform supports it. ``amortize_tapers`` moves taper construction out
    of the timed region (the filterbank, whose cost does not depend on K,
    is always timed). Audio I/O never appears in the timed region; ``x``
    is already in memory.
    """
    if reps < MIN_REPS:
        raise ValueError("reps below minimum")
    if warmup < 0:
        raise ValueError(f"warmup must be >= 0, got {warmup}")
    k_values = [int(k) for k in k_values]
    if not k_values:
        raise ValueError("k_values must not be empty")
    # Fail fast on any invalid (window, k) pair before measuring.
    for k in k_values:
        make_tapers(config.window, k, config.frame_len)

    setup = config.setup_name or "custom"
    records = []
    with _pinned_to_one_cpu():
        for k in k_values:
            cfg = replace(config, k=k)
            fixed_tapers = (make_tapers(cfg.window, k, cfg.frame_len)
                            if amortize_tapers else None)
            filterbank = build_mel_filterbank(cfg, x.sample_rate)

            def run_once():
                extract_features(x, cfg, tapers=fixed_tapers,
                                 filterbank=filterbank)

            for _ in range(warmup):
                run_once()
            times_ms = []
            for _ in range(reps):
                begin = time.perf_counter_ns()
                run_once()
                times_ms.append((time.perf_counter_ns() - begin) / 1e6)
            records.append(TimingRecord(
                k=k, window_kind=cfg.window, setup_name=setup,
                mean_ms=statistics.fmean(times_ms),
                std_ms=statistics.stdev(times_ms), reps=reps))
    return records


def fit_linear(records) -> LinearFit:
    """Ordinary least squares of ``mean_ms`` on ``k``.

    Requires at least 3 distinct taper counts. A constant response has
    zero explainable variance; by convention that fit reports
    ``r_squared = 0`` (and a zero slope) rather than 0/0.
    """
    records = list(records)
    distinct = {r.k for r in records}
    if len(distinct) < 3:
        raise ValueError(
            f"need >=3 distinct K for fit, got {len(distinct)}")
    xs = [float(r.k) for r in records]
    ys = [r.mean_ms for r in records]
    x_mean = sum(xs) / len(xs)
    y_mean = sum(ys) / len(ys)
    sxx = sum((x - x_mean) ** 2 for x in xs)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    ss_tot = sum((y - y_mean) ** 2 for y in ys)
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    r_squared = 0.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return LinearFit(slope=slope, intercept=intercept, r_squared=r_squared)


def format_csv(records, fits=None, metadata=None) -> str:
    """Render timing records as the CSV report.

    ``metadata`` (mapping) and per-window fits are emitted as ``#``
    comments so the column block stays machine-readable. Floats use
    ``repr`` for lossless round-tripping.
    """
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(",".join(CSV_COLUMNS))
    for r in records:
        lines.append(",".join([r.window_kind.label, r.setup_name, str(r.k),
                               repr(r.mean_ms), repr(r.std_ms), str(r.reps)]))
    for label, fit in (fits or {}).items():
        lines.append(f"# fit window={label} slope_ms_per_k={fit.slope!r} "
                     f"intercept_ms={fit.intercept!r} r_squared={fit.r_squared!r}")
    return "\n".join(lines) + "\n"
