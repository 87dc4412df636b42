"""Multitaper-mel spectrogram features for keyword-spotting pipelines.

Classical-window and multitaper power spectrograms (Hermite and sinusoidal
taper families), triangular mel filterbanks, calibrated noise mixing, a
taper-count cost benchmark, and independent verification oracles. The hot
kernel has a compiled (FFTW) and a pure-numpy implementation; see
:mod:`mtmel.backend`.
"""

from .audio import AudioBuffer, NoiseKind, NoiseMixSpec, crop_one_second, mix_noise, read_wav, write_wav
from .backend import active_backend, available_backends, set_backend
from .bench import LinearFit, TimingRecord, fit_linear, time_feature_extraction
from .config import SETUPS, FeatureConfig, TransformMode
from .errors import (
    AudioFormatError,
    FeatureFileError,
    MtmelError,
    SignalTooShortError,
    SilentSignalError,
)
from .featio import read_feature_bin, write_feature, write_feature_bin
from .melfeat import (
    MelFeatureMatrix,
    MelFilterbank,
    build_mel_filterbank,
    hz_to_mel,
    mel_feature,
    mel_to_hz,
)
from .pipeline import extract_features
from .spectral import (
    FramingPlan,
    SpectrogramMatrix,
    frame_signal,
    multitaper_spectrogram,
    naive_dft_power,
    single_taper_spectrogram,
)
from .testkit import reference_mel_feature, run_suites, synthetic_chirp
from .windows import (
    CLASSICAL_FAMILIES,
    MULTITAPER_FAMILIES,
    TaperSet,
    WindowFamily,
    WindowKind,
    make_classical_window,
    make_hermite_tapers,
    make_swce_tapers,
    make_tapers,
    swce_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "AudioFormatError",
    "CLASSICAL_FAMILIES",
    "FeatureConfig",
    "FeatureFileError",
    "FramingPlan",
    "LinearFit",
    "MelFeatureMatrix",
    "MelFilterbank",
    "MtmelError",
    "MULTITAPER_FAMILIES",
    "NoiseKind",
    "NoiseMixSpec",
    "SETUPS",
    "SignalTooShortError",
    "SilentSignalError",
    "SpectrogramMatrix",
    "TaperSet",
    "TimingRecord",
    "TransformMode",
    "WindowFamily",
    "WindowKind",
    "active_backend",
    "available_backends",
    "build_mel_filterbank",
    "crop_one_second",
    "extract_features",
    "fit_linear",
    "frame_signal",
    "hz_to_mel",
    "make_classical_window",
    "make_hermite_tapers",
    "make_swce_tapers",
    "make_tapers",
    "mel_feature",
    "mel_to_hz",
    "mix_noise",
    "multitaper_spectrogram",
    "naive_dft_power",
    "read_feature_bin",
    "read_wav",
    "reference_mel_feature",
    "run_suites",
    "set_backend",
    "single_taper_spectrogram",
    "swce_weights",
    "synthetic_chirp",
    "time_feature_extraction",
    "write_feature",
    "write_feature_bin",
    "write_wav",
    "__version__",
]
