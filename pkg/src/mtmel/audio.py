"""WAV ingestion, one-second energy cropping, and calibrated noise mixing.

Pipeline entry points require mono 16 kHz PCM-16 input; nothing here
resamples. Noise is white Gaussian, drawn from a seeded PCG64 stream via an
explicit Box-Muller transform so byte-identical output is reproducible on
any platform.
"""

from __future__ import annotations

import enum
import logging
import math
import wave
from dataclasses import dataclass

import numpy as np

from .errors import AudioFormatError, SignalTooShortError, SilentSignalError

__all__ = [
    "PIPELINE_SAMPLE_RATE",
    "AudioBuffer",
    "NoiseKind",
    "NoiseMixSpec",
    "crop_one_second",
    "mix_noise",
    "read_wav",
    "write_wav",
]

log = logging.getLogger(__name__)

PIPELINE_SAMPLE_RATE = 16000

# Short-term energy framing for onset detection: 25 ms windows, 10 ms hop.
_ENERGY_FRAME = 400
_ENERGY_HOP = 160
_CROP_LEN = 16000
_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class AudioBuffer:
    """Immutable float64 sample vector plus its sample rate.

    Samples are nominally in [-1, 1]; readers guarantee that range and
    writers clip back into it, but synthesized intermediates (e.g. a
    unit-power sinusoid) may exceed it. Only finiteness is enforced.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return len(self) / self.sample_rate


class NoiseKind(str, enum.Enum):
    WGN = "wgn"


@dataclass(frozen=True)
class NoiseMixSpec:
    """Target SNR in dB plus the noise source and its 64-bit seed.

    ``snr_db = +inf`` is the documented no-mix sentinel; ``-inf`` and NaN
    are rejected.
    """

    snr_db: float
    seed: int = 0
    noise_kind: NoiseKind = NoiseKind.WGN

    def __post_init__(self) -> None:
        snr = float(self.snr_db)
        if math.isnan(snr) or snr == -math.inf:
            raise ValueError(f"snr_db must be finite or +inf, got {snr}")
        object.__setattr__(self, "snr_db", snr)
        object.__setattr__(self, "noise_kind", NoiseKind(self.noise_kind))
        if not 0 <= self.seed <= _MAX_SEED:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")

    @property
    def is_identity(self) -> bool:
        return self.snr_db == math.inf


def read_wav(path) -> AudioBuffer:
    """Read a mono 16 kHz PCM-16 WAV file into [-1, 1) floats.

    Integer samples are divided by 32768. Any deviation from the expected
    format raises :class:`AudioFormatError` naming the offending field.
    """
    try:
        with wave.open(str(path), "rb") as reader:
            channels = reader.getnchannels()
            if channels != 1:
                raise AudioFormatError(f"channels: expected 1, got {channels}")
            rate = reader.getframerate()
            if rate != PIPELINE_SAMPLE_RATE:
                raise AudioFormatError(
                    f"sample_rate: expected {PIPELINE_SAMPLE_RATE}, got {rate}")
            width = reader.getsampwidth()
            if width != 2:
                raise AudioFormatError(f"sample_width: expected 2, got {width}")
            n_frames = reader.getnframes()
            raw = reader.readframes(n_frames)
    except wave.Error as exc:
        raise AudioFormatError(f"not a PCM RIFF/WAVE file: {exc}") from exc
    if len(raw) != 2 * n_frames:
        raise AudioFormatError(
            f"truncated data: expected {n_frames} frames, got {len(raw) // 2}")
    ints = np.frombuffer(raw, dtype="<i2")
    return AudioBuffer(samples=ints.astype(np.float64) / 32768.0,
                       sample_rate=PIPELINE_SAMPLE_RATE)


def write_wav(buf: AudioBuffer, path) -> None:
    """Write PCM-16 mono WAV; quantization inverts :func:`read_wav` exactly."""
    scaled = np.rint(buf.samples * 32768.0)
    clipped = np.count_nonzero((scaled < -32768.0) | (scaled > 32767.0))
    if clipped:
        log.warning("write_wav: clipped %d of %d samples to the PCM-16 range",
                    clipped, len(buf))
    ints = np.clip(scaled, -32768.0, 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as writer:
        writer.setnchannels(1)
        writer.setsampwidth(2)
        writer.setframerate(buf.sample_rate)
        writer.writeframes(ints.tobytes())


def _short_term_energy(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Frame energies over 25 ms windows at a 10 ms hop, plus frame starts.

    A final right-aligned frame is appended when the hop does not land
    exactly on the end, so every sample is covered by some frame.
    """
    starts = list(range(0, len(x) - _ENERGY_FRAME + 1, _ENERGY_HOP))
    if starts[-1] != len(x) - _ENERGY_FRAME:
        starts.append(len(x) - _ENERGY_FRAME)
    starts = np.asarray(starts)
    energies = np.asarray([np.sum(x[s:s + _ENERGY_FRAME] ** 2) for s in starts])
    return energies, starts


def crop_one_second(x: AudioBuffer, threshold_ratio: float = 0.1) -> AudioBuffer:
    """Extract the 16000-sample window containing the keyword onset.

    The onset is the start of the earliest 25 ms frame whose energy exceeds
    ``threshold_ratio`` times the peak frame energy. The window starts at
    the onset, right-aligned when the onset sits within one second of the
    end. Silent input (or a threshold no frame exceeds) falls back to the
    leftmost window.
    """
    if x.sample_rate != PIPELINE_SAMPLE_RATE:
        raise ValueError(
            f"sample_rate: expected {PIPELINE_SAMPLE_RATE}, got {x.sample_rate}")
    if not 0.0 <= threshold_ratio < 1.0:
        raise ValueError(
            f"threshold_ratio must be in [0, 1), got {threshold_ratio}")
    if len(x) < _CROP_LEN:
        raise SignalTooShortError(
            f"need at least {_CROP_LEN} samples to crop, got {len(x)}")
    if len(x) == _CROP_LEN:
        return x

    energies, starts = _short_term_energy(x.samples)
    peak = energies.max()
    above = energies > threshold_ratio * peak
    if peak == 0.0 or not above.any():
        onset = 0
    else:
        onset = int(starts[np.argmax(above)])
    start = min(onset, len(x) - _CROP_LEN)
    return AudioBuffer(samples=x.samples[start:start + _CROP_LEN],
                       sample_rate=x.sample_rate)


def _gaussian_noise(n: int, seed: int) -> np.ndarray:
    """Unit-variance Gaussian draws via Box-Muller on PCG64 uniforms.

    The uniform stream of PCG64 is specified bit-exactly, and the explicit
    transform avoids any dependence on numpy's internal normal sampler, so
    the output is stable across platforms and numpy versions.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    u1 = rng.random(n)
    u2 = rng.random(n)
    # 1 - u1 lies in (0, 1], keeping the log finite.
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def mix_noise(x: AudioBuffer, spec: NoiseMixSpec) -> AudioBuffer:
    """Add seeded Gaussian noise scaled to hit the requested SNR.

    The gain is calibrated against the empirical noise power, so the
    post-mix, pre-clip SNR equals ``spec.snr_db`` up to float rounding.
    Samples pushed outside [-1, 1] are clipped and the count logged.
    """
    if spec.is_identity:
        return x
    signal_power = float(np.mean(x.samples ** 2))
    if signal_power == 0.0:
        raise SilentSignalError("cannot define SNR for silent signal")
    noise = _gaussian_noise(len(x), spec.seed)
    noise_power = float(np.mean(noise ** 2))
    gain = math.sqrt(signal_power / (noise_power * 10.0 ** (spec.snr_db / 10.0)))
    mixed = x.samples + gain * noise
    clipped = np.count_nonzero((mixed < -1.0) | (mixed > 1.0))
    if clipped:
        log.warning("mix_noise: clipped %d of %d samples at snr_db=%g",
                    clipped, len(x), spec.snr_db)
        mixed = np.clip(mixed, -1.0, 1.0)
    return AudioBuffer(samples=mixed, sample_rate=x.sample_rate)
