"""Classical windows and multitaper families for spectrogram estimation.

A :class:`TaperSet` bundles K mutually orthonormal windows ("tapers") of a
common frame length together with their nonnegative combination weights.
Classical windows (Hann, Hamming, Bartlett, boxcar, Kaiser) are represented
as the degenerate K=1 case with weight [1], so single-window and multitaper
feature paths share one contract: every taper row has unit L2 norm and rows
are pairwise orthogonal.

Two multitaper families are provided:

* Hermite tapers: Gaussian-weighted Hermite functions sampled on a symmetric
  grid, weighted uniformly with 1/K. Well suited to signals whose frequency
  content drifts within a frame.
* SWCE tapers (sine-weighted cepstrum estimator): the discrete sine basis
  ``sin(pi*n*k/(N+1))`` with a decreasing cosine-shaped weight profile. A
  "modified" variant sharpens the weight profile by raising it to the 8th
  power and shifting the cosine phase, which concentrates nearly all weight
  on the lowest-order tapers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_KAISER_BETA",
    "MAX_HERMITE_COUNT",
    "TaperSet",
    "WindowFamily",
    "WindowKind",
    "make_classical_window",
    "make_hermite_tapers",
    "make_swce_tapers",
    "make_tapers",
    "swce_weights",
]

DEFAULT_KAISER_BETA = 8.168

# The scaled three-term recursion keeps Hermite values O(1), but the grid
# span formula below has only been validated up to this order.
MAX_HERMITE_COUNT = 12

UNIT_NORM_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-6


class WindowFamily(str, enum.Enum):
    """Names of the supported window generators."""

    HANN = "hann"
    HAMMING = "hamming"
    BARTLETT = "bartlett"
    BOXCAR = "boxcar"
    KAISER = "kaiser"
    HERMITE = "hermite"
    SWCE = "swce"
    SWCE_MODIFIED = "swce_mod"


CLASSICAL_FAMILIES = (
    WindowFamily.HANN,
    WindowFamily.HAMMING,
    WindowFamily.BARTLETT,
    WindowFamily.BOXCAR,
    WindowFamily.KAISER,
)

MULTITAPER_FAMILIES = (
    WindowFamily.HERMITE,
    WindowFamily.SWCE,
    WindowFamily.SWCE_MODIFIED,
)


@dataclass(frozen=True)
class WindowKind:
    """A window family plus any shape parameter it needs.

    Only the Kaiser window takes a parameter; ``kaiser_beta`` is ignored by
    every other family.
    """

    family: WindowFamily
    kaiser_beta: float = DEFAULT_KAISER_BETA

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", WindowFamily(self.family))
        beta = float(self.kaiser_beta)
        if not math.isfinite(beta) or beta <= 0.0:
            raise ValueError(f"kaiser_beta must be finite and > 0, got {self.kaiser_beta}")
        object.__setattr__(self, "kaiser_beta", beta)

    @property
    def is_classical(self) -> bool:
        return self.family in CLASSICAL_FAMILIES

    @property
    def label(self) -> str:
        return self.family.value


def _as_kind(kind: "WindowKind | WindowFamily | str") -> WindowKind:
    if isinstance(kind, WindowKind):
        return kind
    return WindowKind(WindowFamily(kind))


@dataclass(frozen=True)
class TaperSet:
    """K orthonormal windows of a common length and their weights.

    Invariants are checked at construction time: taper rows have unit L2
    norm within 1e-9, pairwise inner products are at most 1e-6 in magnitude,
    and all weights are nonnegative.
    """

    tapers: np.ndarray
    weights: np.ndarray
    kind: WindowKind
    frame_len: int

    def __post_init__(self) -> None:
        tapers = np.ascontiguousarray(np.atleast_2d(self.tapers), dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64).reshape(-1)
        tapers.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "tapers", tapers)
        object.__setattr__(self, "weights", weights)

        k, n = tapers.shape
        if k < 1:
            raise ValueError("a TaperSet needs at least one taper")
        if n != self.frame_len:
            raise ValueError(f"taper length {n} does not match frame_len {self.frame_len}")
        if weights.shape != (k,):
            raise ValueError(f"expected {k} weights, got {weights.shape}")
        if np.any(weights < 0.0):
            raise ValueError("taper weights must be nonnegative")

        gram = tapers @ tapers.T
        norm_err = np.max(np.abs(np.diag(gram) - 1.0))
        if norm_err > 2.0 * UNIT_NORM_TOL:
            raise ValueError(f"taper rows are not unit-norm (max deviation {norm_err:.3e})")
        cross = np.abs(gram - np.diag(np.diag(gram)))
        if k > 1 and cross.max() > ORTHOGONALITY_TOL:
            raise ValueError(f"taper rows are not orthogonal (max cross {cross.max():.3e})")

    @property
    def k(self) -> int:
        """Number of tapers."""
        return self.tapers.shape[0]


def _orthonormalize_rows(rows: np.ndarray) -> np.ndarray:
    """Orthonormalize matrix rows in order, as ordered Gram-Schmidt would.

    Uses a QR factorization of the transpose, so row ``k`` is corrected only
    against rows ``0..k-1``. Signs are fixed to keep each output row aligned
    with its input row, which makes the operation a near-identity when the
    input rows are already orthonormal.
    """
    q, r = np.linalg.qr(rows.T)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0.0] = 1.0
    return np.ascontiguousarray((q * signs).T)


def _classical_samples(kind: WindowKind, n: int) -> np.ndarray:
    # Periodic (DFT-even) convention: denominator n, not n - 1.
    idx = np.arange(n, dtype=np.float64)
    family = kind.family
    if family is WindowFamily.BOXCAR:
        return np.ones(n)
    if family is WindowFamily.HANN:
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * idx / n)
    if family is WindowFamily.HAMMING:
        return 0.54 - 0.46 * np.cos(2.0 * np.pi * idx / n)
    if family is WindowFamily.BARTLETT:
        return 1.0 - np.abs(2.0 * idx / n - 1.0)
    if family is WindowFamily.KAISER:
        beta = kind.kaiser_beta
        arg = 1.0 - (2.0 * idx / n - 1.0) ** 2
        return np.i0(beta * np.sqrt(arg)) / np.i0(beta)
    raise ValueError(f"{family.value} is not a classical window")


def make_classical_window(kind: "WindowKind | WindowFamily | str", n: int) -> TaperSet:
    """Build a single classical window as a K=1 taper set.

    The window is sampled with the periodic convention used by common STFT
    implementations and then L2-normalized, so it satisfies the same
    unit-norm contract as the multitaper families.

    Parameters
    ----------
    kind : WindowKind, WindowFamily or str
        One of the five classical variants (``hann``, ``hamming``,
        ``bartlett``, ``boxcar``, ``kaiser``).
    n : int
        Frame length in samples, at least 2.
    """
    kind = _as_kind(kind)
    if not kind.is_classical:
        raise ValueError(f"{kind.label} is not a classical window kind")
    if n < 2:
        raise ValueError(f"frame length must be >= 2, got {n}")
    raw = _classical_samples(kind, n)
    taper = raw / np.linalg.norm(raw)
    return TaperSet(tapers=taper[np.newaxis, :], weights=np.array([1.0]),
                    kind=kind, frame_len=n)


def _hermite_grid(k_count: int, n: int) -> np.ndarray:
    # Span covers the effective support of the first k_count Hermite
    # functions; endpoint values decay below 1e-6.
    half_span = math.sqrt(2.0 * k_count + 1.0) + 3.0
    return np.linspace(-half_span, half_span, n)


def _hermite_samples(k_count: int, n: int) -> np.ndarray:
    """Sample the first ``k_count`` orthonormal Hermite functions.

    Evaluates ``exp(-t^2/2) * H_k(t) / sqrt(sqrt(pi) * 2^k * k!)`` through
    the scaled recursion ``psi_k = t*sqrt(2/k)*psi_{k-1} -
    sqrt((k-1)/k)*psi_{k-2}``, which keeps all intermediates O(1) instead of
    letting ``H_k`` and ``k!`` overflow separately.
    """
    t = _hermite_grid(k_count, n)
    psi = np.empty((k_count, n))
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * t * t)
    if k_count > 1:
        psi[1] = math.sqrt(2.0) * t * psi[0]
    for k in range(2, k_count):
        psi[k] = math.sqrt(2.0 / k) * t * psi[k - 1] - math.sqrt((k - 1.0) / k) * psi[k - 2]
    return psi


def make_hermite_tapers(k_count: int, n: int) -> TaperSet:
    """Build the first ``k_count`` Hermite tapers of length ``n``.

    The sampled functions are re-orthonormalized (ordered QR) because
    discretization slightly perturbs their continuous orthonormality, and
    the variance argument behind multitaper averaging assumes exact
    orthonormality. Weights are uniform, 1/K.

    Parameters
    ----------
    k_count : int
        Number of tapers, between 1 and ``MAX_HERMITE_COUNT``.
    n : int
        Frame length in samples, at least ``k_count``.
    """
    if not 1 <= k_count <= MAX_HERMITE_COUNT:
        raise ValueError(
            f"k_count must be in 1..{MAX_HERMITE_COUNT}, got {k_count}")
    if n < k_count:
        raise ValueError(f"frame length {n} is shorter than taper count {k_count}")
    tapers = _orthonormalize_rows(_hermite_samples(k_count, n))
    weights = np.full(k_count, 1.0 / k_count)
    return TaperSet(tapers=tapers, weights=weights,
                    kind=WindowKind(WindowFamily.HERMITE), frame_len=n)


def _swce_samples(k_count: int, n: int, gain: float) -> np.ndarray:
    # Discrete sine basis on sample index 1..n; rows are exactly orthogonal
    # and, for gain = sqrt(2/(n+1)), exactly unit-norm.
    orders = np.arange(1, k_count + 1, dtype=np.float64)
    idx = np.arange(1, n + 1, dtype=np.float64)
    return gain * np.sin(np.pi * np.outer(orders, idx) / (n + 1.0))


def swce_weights(k_count: int, n: int, modified: bool = False) -> np.ndarray:
    """Combination weights for the SWCE taper family.

    The profile is ``cos(pi*k*G/n) + beta`` for taper order ``k = 1..K``
    with ``G = floor(n/K)``, normalized to sum to 1. The original variant
    uses ``beta = 1``, which makes every term nonnegative. The modified
    variant uses ``beta = 0.5`` and raises the profile elementwise to the
    8th power before normalizing; the even power keeps the weights
    nonnegative and concentrates them on the lowest orders.

    For ``k_count == 1`` the profile degenerates (the single cosine term can
    be -1), so the weight is defined directly as [1.0].
    """
    if not 1 <= k_count <= n:
        raise ValueError(f"k_count must be in 1..{n}, got {k_count}")
    if k_count == 1:
        return np.array([1.0])
    g = n // k_count
    orders = np.arange(1, k_count + 1, dtype=np.float64)
    beta = 0.5 if modified else 1.0
    profile = np.cos(np.pi * orders * g / n) + beta
    if modified:
        profile = profile ** 8
    return profile / profile.sum()


def make_swce_tapers(k_count: int, n: int, modified: bool = False) -> TaperSet:
    """Build ``k_count`` SWCE tapers of length ``n``.

    Taper ``k`` (for ``k = 1..K``) has samples ``gain * sin(pi*n*k/(N+1))``
    over sample index ``n = 1..N``. The base gain ``sqrt(2/(N+1))`` makes
    the rows exactly orthonormal; the modified variant generates with gain
    ``K`` times larger, which the unit-norm contract then divides back out,
    so the two variants differ only in their weights (and, downstream of a
    log, by a constant offset that the normalization removes).
    """
    if not 1 <= k_count <= n:
        raise ValueError(f"k_count must be in 1..{n}, got {k_count}")
    gain = math.sqrt(2.0 / (n + 1.0))
    if modified:
        gain *= k_count
    tapers = _orthonormalize_rows(_swce_samples(k_count, n, gain))
    weights = swce_weights(k_count, n, modified=modified)
    family = WindowFamily.SWCE_MODIFIED if modified else WindowFamily.SWCE
    return TaperSet(tapers=tapers, weights=weights,
                    kind=WindowKind(family), frame_len=n)


def make_tapers(kind: "WindowKind | WindowFamily | str", k_count: int, n: int) -> TaperSet:
    """Build a taper set of any supported kind.

    Classical kinds require ``k_count == 1``; the multitaper families accept
    their documented K ranges.
    """
    kind = _as_kind(kind)
    if kind.is_classical:
        if k_count != 1:
            raise ValueError(
                f"{kind.label} is a single-window kind; k must be 1, got {k_count}")
        return make_classical_window(kind, n)
    if kind.family is WindowFamily.HERMITE:
        return make_hermite_tapers(k_count, n)
    return make_swce_tapers(k_count, n,
                            modified=kind.family is WindowFamily.SWCE_MODIFIED)
