"""Selection between the compiled spectrogram kernel and the NumPy fallback.

The compiled extension (Cython + FFTW) is used when it imported cleanly;
otherwise the pure NumPy kernel takes over. The choice can be forced with
the ``MTMEL_BACKEND`` environment variable (``compiled`` or ``pure``) or at
runtime with :func:`set_backend`, which the backend benchmark uses to time
both paths in one process.

Both kernels compute the same quantity in double precision; they agree with
the brute-force DFT oracle to well below 1e-6 relative error, but are not
bitwise identical to each other.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernel_pure

try:
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

_VALID = ("compiled", "pure")

_forced: str | None = None


def _init_from_env() -> None:
    global _forced
    name = os.environ.get("MTMEL_BACKEND")
    if name:
        if name not in _VALID:
            raise ValueError(
                f"MTMEL_BACKEND must be one of {_VALID}, got {name!r}")
        _forced = name


_init_from_env()


def available_backends() -> tuple[str, ...]:
    """Backends usable in this process, preferred first."""
    return ("compiled", "pure") if _compiled is not None else ("pure",)


def active_backend() -> str:
    """Name of the backend the next kernel call will use."""
    if _forced is not None:
        return _forced
    return "compiled" if _compiled is not None else "pure"


def set_backend(name: str | None) -> None:
    """Force a backend by name, or restore automatic selection with None."""
    global _forced
    if name is not None and name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    _forced = name


def weighted_power(x: np.ndarray, tapers: np.ndarray, weights: np.ndarray,
                   hop: int, n_frames: int) -> np.ndarray:
    """Weighted sum of per-taper one-sided power spectra over all frames.

    Validates shapes once and dispatches to the active kernel. ``x`` must
    hold at least ``(n_frames - 1) * hop + frame_len`` samples.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    tapers = np.ascontiguousarray(np.atleast_2d(tapers), dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64).reshape(-1)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if weights.shape[0] != tapers.shape[0]:
        raise ValueError(
            f"{tapers.shape[0]} tapers but {weights.shape[0]} weights")
    if hop < 1:
        raise ValueError(f"hop must be >= 1, got {hop}")
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")
    needed = (n_frames - 1) * hop + tapers.shape[1]
    if x.shape[0] < needed:
        raise ValueError(
            f"signal of {x.shape[0]} samples is too short for "
            f"{n_frames} frames (needs {needed})")

    name = active_backend()
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError(
                "compiled backend requested but the extension is not available")
        return _compiled.weighted_power(x, tapers, weights, hop, n_frames)
    return _kernel_pure.weighted_power(x, tapers, weights, hop, n_frames)
