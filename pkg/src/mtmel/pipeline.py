"""End-to-end feature extraction: tapers -> spectrogram -> mel features."""

from __future__ import annotations

import numpy as np

from .audio import AudioBuffer
from .config import FeatureConfig
from .melfeat import MelFeatureMatrix, MelFilterbank, build_mel_filterbank, mel_feature
from .spectral import FramingPlan, multitaper_spectrogram
from .windows import TaperSet, make_tapers

__all__ = ["extract_features"]


def extract_features(x, config: FeatureConfig, *,
                     tapers: TaperSet | None = None,
                     filterbank: MelFilterbank | None = None,
                     sample_rate: int | None = None) -> MelFeatureMatrix:
    """Compute the (multitaper-)mel feature matrix for one signal.

    ``tapers`` and ``filterbank`` may be passed in to reuse precomputed
    state across calls (they must match ``config``); otherwise both are
    built here. ``sample_rate`` is taken from ``x`` when it is an
    :class:`AudioBuffer` and defaults to 16000 for bare arrays.
    """
    if isinstance(x, AudioBuffer):
        if sample_rate is not None and sample_rate != x.sample_rate:
            raise ValueError(
                f"sample_rate {sample_rate} conflicts with buffer rate "
                f"{x.sample_rate}")
        sample_rate = x.sample_rate
        samples = x.samples
    else:
        samples = np.ascontiguousarray(x, dtype=np.float64)
        if sample_rate is None:
            sample_rate = 16000
    if tapers is None:
        tapers = make_tapers(config.window, config.k, config.frame_len)
    elif tapers.frame_len != config.frame_len or tapers.k != config.k:
        raise ValueError("provided tapers do not match config")
    if filterbank is None:
        filterbank = build_mel_filterbank(config, sample_rate)
    elif (filterbank.frame_len != config.frame_len
          or filterbank.n_mels != config.n_mels
          or filterbank.sample_rate != sample_rate):
        raise ValueError("provided filterbank does not match config")
    plan = FramingPlan.for_signal(len(samples), config.frame_len, config.hop)
    spec = multitaper_spectrogram(samples, tapers, plan, sample_rate=sample_rate)
    return mel_feature(spec, filterbank, config.transform, config=config)
