"""Mel filterbanks and (multitaper-)mel spectrogram features.

Filters are unit-peak triangles with centers spaced uniformly on the HTK
mel scale between ``f_min`` and ``f_max``, evaluated at the one-sided FFT
bin frequencies. The feature matrix is the natural log of the floored mel
powers (``LOG_MEL``), optionally followed by a normalized conjugate-DFT
rotation of each column (``CEPSTRAL``).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import FeatureConfig, TransformMode
from .spectral import SpectrogramMatrix
from .windows import WindowFamily, WindowKind

__all__ = [
    "LOG_FLOOR",
    "MelFeatureMatrix",
    "MelFilterbank",
    "build_mel_filterbank",
    "hz_to_mel",
    "mel_feature",
    "mel_to_hz",
]

# Floor inside the log; keeps silence frames finite at ln(1e-10).
LOG_FLOOR = 1e-10


def hz_to_mel(hz):
    """HTK mel scale: ``2595 * log10(1 + hz/700)``."""
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    """Inverse of :func:`hz_to_mel`."""
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True)
class MelFilterbank:
    """Nonnegative ``(n_mels, n_freq)`` projection matrix plus band metadata.

    ``center_hz`` holds the strictly increasing triangle peak frequencies.
    """

    matrix: np.ndarray
    center_hz: np.ndarray
    f_min: float
    f_max: float
    n_mels: int
    sample_rate: int
    frame_len: int

    def __post_init__(self) -> None:
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        centers = np.ascontiguousarray(self.center_hz, dtype=np.float64)
        matrix.flags.writeable = False
        centers.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "center_hz", centers)
        if matrix.shape != (self.n_mels, self.frame_len // 2 + 1):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match "
                f"({self.n_mels}, {self.frame_len // 2 + 1})")
        if matrix.min() < 0.0:
            raise ValueError("filterbank entries must be nonnegative")
        if np.any(np.diff(centers) <= 0.0):
            raise ValueError("filter center frequencies must be strictly increasing")


def build_mel_filterbank(config: FeatureConfig, sample_rate: int) -> MelFilterbank:
    """Construct the triangular mel filterbank for a feature configuration.

    Triangle edges are ``n_mels + 2`` points uniform in mel between
    ``mel(f_min)`` and ``mel(f_max)``; filter ``m`` rises over
    ``(edge[m], edge[m+1])`` and falls over ``(edge[m+1], edge[m+2])`` in
    Hz, sampled at the bin frequencies ``j * sample_rate / frame_len``.
    Bins outside ``[f_min, f_max]`` always get weight zero.

    When the frequency grid is too coarse for the narrowest triangles
    (large ``n_mels`` with a short frame), some filters may contain no bin;
    such rows are kept, all zero, and a warning is issued once. The
    downstream log floor keeps those feature rows finite.
    """
    nyquist = sample_rate / 2.0
    if config.f_max > nyquist:
        raise ValueError(
            f"f_max {config.f_max} exceeds the Nyquist frequency {nyquist}")
    n_freq = config.frame_len // 2 + 1
    mel_edges = np.linspace(hz_to_mel(config.f_min), hz_to_mel(config.f_max),
                            config.n_mels + 2)
    hz_edges = mel_to_hz(mel_edges)
    bin_hz = np.arange(n_freq) * (sample_rate / config.frame_len)

    lo = hz_edges[:-2, np.newaxis]
    ctr = hz_edges[1:-1, np.newaxis]
    hi = hz_edges[2:, np.newaxis]
    rising = (bin_hz - lo) / (ctr - lo)
    falling = (hi - bin_hz) / (hi - ctr)
    matrix = np.maximum(0.0, np.minimum(rising, falling))

    empty = ~np.any(matrix > 0.0, axis=1)
    if np.any(empty):
        warnings.warn(
            f"{int(empty.sum())} of {config.n_mels} mel filters contain no FFT "
            f"bin (frame_len {config.frame_len} gives "
            f"{sample_rate / config.frame_len:.1f} Hz bin spacing); their "
            "feature rows will sit at the log floor",
            stacklevel=2)

    return MelFilterbank(matrix=matrix, center_hz=hz_edges[1:-1],
                         f_min=config.f_min, f_max=config.f_max,
                         n_mels=config.n_mels, sample_rate=sample_rate,
                         frame_len=config.frame_len)


@dataclass(frozen=True)
class MelFeatureMatrix:
    """``(n_mels, frame_count)`` feature matrix in natural-log units."""

    values: np.ndarray
    config: FeatureConfig
    transform_mode: TransformMode

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if not np.all(np.isfinite(values)):
            raise ValueError("feature values must be finite")

    @property
    def n_mels(self) -> int:
        return self.values.shape[0]

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]


def _cepstral_rotation(n_mels: int) -> np.ndarray:
    # Real part of the conjugate DFT matrix: cos(2*pi*a*b/n_mels) / n_mels.
    idx = np.arange(n_mels)
    return np.cos(2.0 * np.pi * np.outer(idx, idx) / n_mels) / n_mels


def mel_feature(spec: SpectrogramMatrix, fb: MelFilterbank,
                mode: TransformMode = TransformMode.LOG_MEL,
                config: FeatureConfig | None = None) -> MelFeatureMatrix:
    """Project a power spectrogram through the filterbank and compress.

    LOG_MEL: column ``tau`` is ``ln(max(fb.matrix @ power_tau,
    LOG_FLOOR))``. CEPSTRAL: the log column is additionally rotated by the
    real part of the size-``n_mels`` conjugate DFT matrix scaled by
    ``1/n_mels``.
    """
    mode = TransformMode(mode)
    if fb.frame_len != spec.plan.frame_len:
        raise ValueError(
            f"filterbank frame_len {fb.frame_len} does not match "
            f"spectrogram frame_len {spec.plan.frame_len}")
    if fb.sample_rate != spec.sample_rate:
        raise ValueError(
            f"filterbank sample_rate {fb.sample_rate} does not match "
            f"spectrogram sample_rate {spec.sample_rate}")
    values = np.log(np.maximum(fb.matrix @ spec.values, LOG_FLOOR))
    if mode is TransformMode.CEPSTRAL:
        values = _cepstral_rotation(fb.n_mels) @ values
    if config is None:
        kind = spec.taper_kind if spec.taper_kind is not None \
            else WindowKind(WindowFamily.HANN)
        config = FeatureConfig(hop=spec.plan.hop, frame_len=spec.plan.frame_len,
                               f_min=fb.f_min, f_max=fb.f_max, n_mels=fb.n_mels,
                               window=kind, k=spec.k_used, transform=mode)
    return MelFeatureMatrix(values=values, config=config, transform_mode=mode)
