"""Feature-extraction configuration and the standard parameter presets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .windows import WindowFamily, WindowKind

__all__ = ["FeatureConfig", "SETUPS", "TransformMode"]

SAMPLE_RATE = 16000


class TransformMode(str, enum.Enum):
    """Final transform applied to the mel-projected power column.

    LOG_MEL is the conventional feature: natural log of the floored mel
    powers. CEPSTRAL additionally rotates each log column by the conjugate
    DFT matrix of size n_mels scaled by 1/n_mels, keeping the real part; it
    is provided for completeness but LOG_MEL is the recommended default.
    """

    LOG_MEL = "logmel"
    CEPSTRAL = "cepstral"


# Preset name -> (hop, frame_len, f_min, f_max, n_mels) at 16 kHz.
SETUPS: dict[str, tuple[int, int, float, float, int]] = {
    "A": (320, 640, 10.0, 4000.0, 100),
    "B": (320, 320, 10.0, 4000.0, 100),
    "C": (640, 640, 10.0, 4000.0, 100),
    "D": (320, 640, 10.0, 4000.0, 40),
    "E": (320, 640, 10.0, 8000.0, 40),
}


@dataclass(frozen=True)
class FeatureConfig:
    """Everything needed to turn a 16 kHz buffer into a feature matrix."""

    hop: int
    frame_len: int
    f_min: float
    f_max: float
    n_mels: int
    window: WindowKind = WindowKind(WindowFamily.HANN)
    k: int = 1
    transform: TransformMode = TransformMode.LOG_MEL
    setup_name: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.window, WindowKind):
            object.__setattr__(self, "window",
                               WindowKind(WindowFamily(self.window)))
        if self.hop < 1:
            raise ValueError(f"hop must be >= 1, got {self.hop}")
        if self.frame_len < 2:
            raise ValueError(f"frame_len must be >= 2, got {self.frame_len}")
        if self.hop > self.frame_len:
            raise ValueError(
                f"hop {self.hop} must not exceed frame_len {self.frame_len}")
        if not 0.0 <= self.f_min < self.f_max:
            raise ValueError(
                f"need 0 <= f_min < f_max, got {self.f_min}..{self.f_max}")
        if self.n_mels < 2:
            raise ValueError(f"n_mels must be >= 2, got {self.n_mels}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "transform", TransformMode(self.transform))

    @classmethod
    def from_setup(cls, name: str, **overrides) -> "FeatureConfig":
        """Build a config from one of the named presets (A..E)."""
        try:
            hop, frame_len, f_min, f_max, n_mels = SETUPS[name.upper()]
        except KeyError:
            raise ValueError(
                f"unknown setup {name!r}; choose from {sorted(SETUPS)}") from None
        cfg = cls(hop=hop, frame_len=frame_len, f_min=f_min, f_max=f_max,
                  n_mels=n_mels, setup_name=name.upper())
        return replace(cfg, **overrides) if overrides else cfg

    def describe(self) -> dict:
        """Flat JSON-friendly mapping of the effective configuration."""
        return {
            "setup": self.setup_name,
            "hop": self.hop,
            "frame_len": self.frame_len,
            "f_min": self.f_min,
            "f_max": self.f_max,
            "n_mels": self.n_mels,
            "window": self.window.label,
            "kaiser_beta": self.window.kaiser_beta,
            "k": self.k,
            "transform": self.transform.value,
        }

    @classmethod
    def from_describe(cls, data: dict) -> "FeatureConfig":
        """Inverse of :meth:`describe`; ``cfg.from_describe(cfg.describe())``
        reproduces ``cfg`` exactly."""
        try:
            window = WindowKind(WindowFamily(data["window"]),
                                kaiser_beta=data["kaiser_beta"])
            return cls(hop=data["hop"], frame_len=data["frame_len"],
                       f_min=data["f_min"], f_max=data["f_max"],
                       n_mels=data["n_mels"], window=window, k=data["k"],
                       transform=TransformMode(data["transform"]),
                       setup_name=data["setup"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"malformed config mapping: {exc}") from exc
