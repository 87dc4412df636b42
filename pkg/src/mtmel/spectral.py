"""Framing and power spectrogram estimation.

A frame ``tau`` covers samples ``x[H*tau : H*tau + N]``; no padding or
centering is applied, so the frame count is the largest number of hops that
keeps every frame inside the signal. Spectrograms are one-sided
(``N//2 + 1`` bins, sufficient for real input) and every entry is a
nonnegative power value accumulated in double precision.

The multitaper estimate is the weighted sum of the single-taper power
spectrograms of one frame. With orthonormal tapers and weights summing to
one, averaging K looks at the same frame divides the estimator's relative
variance by roughly ``1 / sum(weights**2)`` without widening the analysis
window.

:func:`naive_dft_power` is a deliberately independent O(N^2) evaluation of
the same per-frame quantity, kept free of FFT calls so it can serve as a
correctness oracle for the fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import backend
from .errors import SignalTooShortError
from .windows import TaperSet, WindowKind

__all__ = [
    "FramingPlan",
    "SpectrogramMatrix",
    "frame_signal",
    "multitaper_spectrogram",
    "naive_dft_power",
    "single_taper_spectrogram",
]


@dataclass(frozen=True)
class FramingPlan:
    """Hop, frame length, and the frame count they induce on a signal."""

    hop: int
    frame_len: int
    signal_len: int
    frame_count: int = field(init=False)

    def __post_init__(self) -> None:
        if self.hop < 1:
            raise ValueError(f"hop must be >= 1, got {self.hop}")
        if self.frame_len < 1:
            raise ValueError(f"frame_len must be >= 1, got {self.frame_len}")
        if self.signal_len < 0:
            raise ValueError(f"signal_len must be >= 0, got {self.signal_len}")
        if self.signal_len >= self.frame_len:
            count = (self.signal_len - self.frame_len) // self.hop + 1
        else:
            count = 0
        object.__setattr__(self, "frame_count", count)

    @classmethod
    def for_signal(cls, signal_len: int, frame_len: int, hop: int) -> "FramingPlan":
        return cls(hop=hop, frame_len=frame_len, signal_len=signal_len)


@dataclass(frozen=True)
class SpectrogramMatrix:
    """One-sided power spectrogram plus the metadata that produced it.

    ``values`` has shape ``(N//2 + 1, frame_count)``; entry ``(f, tau)`` is
    the estimated power at frequency bin ``f`` in frame ``tau``.
    """

    values: np.ndarray
    sample_rate: int
    plan: FramingPlan
    taper_kind: WindowKind | None
    k_used: int

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        expected = (self.plan.frame_len // 2 + 1, self.plan.frame_count)
        if values.shape != expected:
            raise ValueError(
                f"values shape {values.shape} does not match plan {expected}")
        if values.size and values.min() < 0.0:
            raise ValueError("power spectrogram entries must be nonnegative")

    @property
    def freq_bins(self) -> int:
        return self.values.shape[0]

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]


def frame_signal(samples: np.ndarray, plan: FramingPlan) -> np.ndarray:
    """Slice a signal into ``plan.frame_count`` frames of ``frame_len`` samples.

    Returns a read-only ``(frame_count, frame_len)`` view; frame ``tau``
    starts at sample ``hop * tau``. Raises
    :class:`~mtmel.errors.SignalTooShortError` when the signal cannot hold a
    single frame.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if samples.shape[0] != plan.signal_len:
        raise ValueError(
            f"signal has {samples.shape[0]} samples, plan expects {plan.signal_len}")
    if plan.frame_count == 0:
        raise SignalTooShortError(
            f"signal of {plan.signal_len} samples is shorter than one "
            f"frame of {plan.frame_len}")
    return sliding_window_view(samples, plan.frame_len)[::plan.hop][:plan.frame_count]


def _spectrogram(samples, plan, tapers, weights, kind, k_used, sample_rate):
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1 or samples.shape[0] != plan.signal_len:
        raise ValueError("signal does not match the framing plan")
    if plan.frame_count == 0:
        raise SignalTooShortError(
            f"signal of {plan.signal_len} samples is shorter than one "
            f"frame of {plan.frame_len}")
    values = backend.weighted_power(samples, tapers, weights, plan.hop,
                                    plan.frame_count)
    return SpectrogramMatrix(values=values, sample_rate=sample_rate,
                             plan=plan, taper_kind=kind, k_used=k_used)


def single_taper_spectrogram(x, taper: np.ndarray, plan: FramingPlan,
                             sample_rate: int | None = None,
                             kind: WindowKind | None = None) -> SpectrogramMatrix:
    """Power spectrogram with one window: ``|DFT(frame * taper)|**2``.

    ``x`` may be an :class:`~mtmel.audio.AudioBuffer` or a plain sample
    array (pass ``sample_rate`` in that case). The taper is applied as
    given; it is not normalized here. ``kind`` is recorded as metadata when
    provided.
    """
    samples, rate = _coerce_signal(x, sample_rate)
    taper = np.ascontiguousarray(taper, dtype=np.float64)
    if taper.ndim != 1 or taper.shape[0] != plan.frame_len:
        raise ValueError(
            f"taper of length {taper.shape[-1]} does not match frame_len "
            f"{plan.frame_len}")
    return _spectrogram(samples, plan, taper[np.newaxis, :], np.array([1.0]),
                        kind, 1, rate)


def multitaper_spectrogram(x, tapers: TaperSet, plan: FramingPlan,
                           sample_rate: int | None = None) -> SpectrogramMatrix:
    """Weighted multitaper power spectrogram.

    Entry ``(f, tau)`` equals ``sum_k weights[k] * |DFT(frame_tau *
    taper_k)|**2 [f]``, identical (to rounding) to the weight-combined
    single-taper spectrograms.
    """
    samples, rate = _coerce_signal(x, sample_rate)
    if tapers.frame_len != plan.frame_len:
        raise ValueError(
            f"taper frame_len {tapers.frame_len} does not match plan "
            f"frame_len {plan.frame_len}")
    return _spectrogram(samples, plan, tapers.tapers, tapers.weights,
                        tapers.kind, tapers.k, rate)


def _coerce_signal(x, sample_rate):
    samples = getattr(x, "samples", None)
    if samples is not None:
        return np.asarray(samples, dtype=np.float64), x.sample_rate
    return np.asarray(x, dtype=np.float64), (sample_rate or 0)


def naive_dft_power(frame: np.ndarray, taper: np.ndarray) -> np.ndarray:
    """Brute-force one-sided power spectrum of a single windowed frame.

    Evaluates the DFT sum directly from cosine and sine tables, O(N^2),
    sharing no transform code with the fast kernels. Intended as a test and
    verification oracle, not for production use.
    """
    frame = np.asarray(frame, dtype=np.float64)
    taper = np.asarray(taper, dtype=np.float64)
    if frame.shape != taper.shape or frame.ndim != 1:
        raise ValueError(
            f"frame {frame.shape} and taper {taper.shape} must be equal-length vectors")
    n = frame.shape[0]
    v = frame * taper
    idx = np.arange(n)
    bins = np.arange(n // 2 + 1)
    angles = 2.0 * np.pi * np.outer(bins, idx) / n
    re = np.cos(angles) @ v
    im = -np.sin(angles) @ v
    return re * re + im * im
