"""Independent oracles and statistical harnesses.

Everything here re-derives its answers with arithmetic separate from the
production code paths it checks: dense-grid quadrature for Hermite
orthonormality, scalar re-evaluation of the SWCE weight profile, a naive
DFT chain for spectrograms, and Monte-Carlo estimation of the multitaper
variance-reduction factor. The checks are exposed both to the test suite
and to the ``verify`` CLI subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import FeatureConfig, TransformMode
from .melfeat import LOG_FLOOR
from .spectral import naive_dft_power
from .windows import (
    CLASSICAL_FAMILIES,
    MULTITAPER_FAMILIES,
    ORTHOGONALITY_TOL,
    UNIT_NORM_TOL,
    TaperSet,
    WindowFamily,
    make_tapers,
    swce_weights,
)

__all__ = [
    "CheckResult",
    "MC_MIN_FRAMES",
    "SUITE_NAMES",
    "VarianceReport",
    "hermite_quadrature_oracle",
    "mc_variance",
    "reference_mel_feature",
    "run_suites",
    "synthetic_chirp",
]

MC_MIN_FRAMES = 1000
_MC_CHUNK = 1000

# K values exercised by the verification suites.
_K_GRID = (3, 5, 7, 10)
_N_GRID = (320, 640)


@dataclass(frozen=True)
class VarianceReport:
    """Monte-Carlo relative variance of the multitaper estimate at one bin.

    ``weights_sq_sum`` is the analytic prediction (sum of squared weights)
    for unit-power white Gaussian input.
    """

    k: int
    weights_sq_sum: float
    measured_rel_var: float
    n_frames: int

    def __post_init__(self) -> None:
        if self.n_frames < MC_MIN_FRAMES:
            raise ValueError(
                f"n_frames must be >= {MC_MIN_FRAMES}, got {self.n_frames}")
        if not self.measured_rel_var > 0.0:
            raise ValueError("measured_rel_var must be positive")


def mc_variance(tapers: TaperSet, n_frames: int, seed: int) -> VarianceReport:
    """Measure the relative variance of the taper-averaged power estimate.

    Draws ``n_frames`` independent white Gaussian frames and evaluates the
    weighted multitaper power at the fixed interior bin ``frame_len // 4``
    with an explicit complex dot product (no FFT, nothing shared with the
    production kernels). Frames are generated in chunks of 1000 with the
    chunk ``c`` seeded by ``SeedSequence([seed, c])``, so results do not
    depend on chunk scheduling and the work may be split across workers.
    """
    if n_frames < MC_MIN_FRAMES:
        raise ValueError(f"n_frames must be >= {MC_MIN_FRAMES}, got {n_frames}")
    n = tapers.frame_len
    bin_idx = n // 4
    phase = np.exp(-2j * np.pi * bin_idx * np.arange(n) / n)
    basis = (tapers.tapers * phase).T
    powers = np.empty(n_frames)
    for chunk, start in enumerate(range(0, n_frames, _MC_CHUNK)):
        count = min(_MC_CHUNK, n_frames - start)
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, chunk])))
        frames = rng.standard_normal((count, n))
        coefs = frames @ basis
        powers[start:start + count] = (coefs.real ** 2
                                       + coefs.imag ** 2) @ tapers.weights
    mean = float(powers.mean())
    var = float(powers.var(ddof=1))
    return VarianceReport(k=tapers.k,
                          weights_sq_sum=float(np.sum(tapers.weights ** 2)),
                          measured_rel_var=var / mean ** 2,
                          n_frames=n_frames)


def hermite_quadrature_oracle(k_count: int, grid_points: int = 6400) -> np.ndarray:
    """Gram matrix of the first ``k_count`` Hermite functions by quadrature.

    Evaluates ``exp(-t^2/2) H_k(t) / sqrt(sqrt(pi) 2^k k!)`` through
    ``numpy.polynomial.hermite`` (independent of the production recursion)
    on a dense trapezoid grid over ``|t| <= sqrt(2 k_count + 1) + 5``. The
    integrand decays to ~1e-26 at the endpoints, so the trapezoid rule is
    accurate to machine precision here; off-diagonals of the result bound
    the continuum orthonormality error.
    """
    if k_count < 1:
        raise ValueError(f"k_count must be >= 1, got {k_count}")
    if grid_points < 10 * min(_N_GRID):
        raise ValueError(
            f"grid_points must be >= {10 * min(_N_GRID)}, got {grid_points}")
    half_width = math.sqrt(2.0 * k_count + 1.0) + 5.0
    t = np.linspace(-half_width, half_width, grid_points)
    envelope = np.exp(-(t ** 2) / 2.0)
    psi = np.empty((k_count, grid_points))
    for k in range(k_count):
        coef = np.zeros(k + 1)
        coef[k] = 1.0
        hermite_k = np.polynomial.hermite.hermval(t, coef)
        norm = math.sqrt(math.sqrt(math.pi) * 2.0 ** k * math.factorial(k))
        psi[k] = envelope * hermite_k / norm
    quad_w = np.full(grid_points, t[1] - t[0])
    quad_w[0] /= 2.0
    quad_w[-1] /= 2.0
    return (psi * quad_w) @ psi.T


def synthetic_chirp(n_samples: int = 16000, sample_rate: int = 16000) -> np.ndarray:
    """Deterministic keyword-like test signal for golden comparisons.

    A linear 120 -> 3600 Hz sweep plus a weak 440 Hz tone under a
    raised-cosine envelope, over a quiet broadband bed (fixed-seed PCG64
    Gaussian, bit-reproducible across platforms). The bed gives every mel
    band in every frame energy far above the log floor, so floor-rounding
    cannot make two correct implementations disagree near the boundary.
    Peak amplitude stays well inside [-1, 1], surviving PCM round-trips.
    """
    t = np.arange(n_samples) / sample_rate
    duration = n_samples / sample_rate
    sweep_rate = (3600.0 - 120.0) / duration
    keyword = (0.45 * np.sin(2.0 * np.pi * (120.0 * t + 0.5 * sweep_rate * t ** 2))
               + 0.1 * np.sin(2.0 * np.pi * 440.0 * t))
    envelope = 0.5 - 0.5 * np.cos(2.0 * np.pi * t / duration)
    rng = np.random.Generator(np.random.PCG64(20260813))
    u1, u2 = rng.random(n_samples), rng.random(n_samples)
    bed = np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)
    return envelope * keyword + 0.02 * bed


def _reference_filterbank(config: FeatureConfig, sample_rate: int) -> np.ndarray:
    """Scalar-loop triangular mel filterbank for the oracle chain."""
    n_freq = config.frame_len // 2 + 1
    mel_lo = 2595.0 * math.log10(1.0 + config.f_min / 700.0)
    mel_hi = 2595.0 * math.log10(1.0 + config.f_max / 700.0)
    edges_hz = [700.0 * (10.0 ** ((mel_lo + (mel_hi - mel_lo) * i
                                   / (config.n_mels + 1)) / 2595.0) - 1.0)
                for i in range(config.n_mels + 2)]
    matrix = np.zeros((config.n_mels, n_freq))
    for m in range(config.n_mels):
        lo, ctr, hi = edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]
        for j in range(n_freq):
            freq = j * sample_rate / config.frame_len
            rising = (freq - lo) / (ctr - lo)
            falling = (hi - freq) / (hi - ctr)
            matrix[m, j] = max(0.0, min(rising, falling))
    return matrix


def reference_mel_feature(x, config: FeatureConfig, sample_rate: int = 16000,
                          log_floor: float = LOG_FLOOR) -> np.ndarray:
    """Oracle-chain feature matrix: naive DFT -> matrix multiply -> log.

    Frames are sliced with explicit start arithmetic, each taper's power
    spectrum comes from :func:`naive_dft_power`, and the filterbank is the
    scalar-loop construction above. Used to generate golden matrices and
    to cross-check the production pipeline end to end. Slow by design.
    ``log_floor`` may be lowered to inspect how close raw values come to
    the production floor.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    n, hop = config.frame_len, config.hop
    n_frames = (len(x) - n) // hop + 1
    if n_frames < 1:
        raise ValueError("signal shorter than one frame")
    tapers = make_tapers(config.window, config.k, n)
    filterbank = _reference_filterbank(config, sample_rate)
    out = np.empty((config.n_mels, n_frames))
    for tau in range(n_frames):
        frame = x[tau * hop:tau * hop + n]
        power = np.zeros(n // 2 + 1)
        for taper, weight in zip(tapers.tapers, tapers.weights):
            power += weight * naive_dft_power(frame, taper)
        out[:, tau] = np.log(np.maximum(filterbank @ power, log_floor))
    if config.transform is TransformMode.CEPSTRAL:
        idx = np.arange(config.n_mels)
        dft = np.exp(-2j * np.pi * np.outer(idx, idx) / config.n_mels)
        out = (dft.conj().T @ out).real / config.n_mels
    return out


@dataclass(frozen=True)
class CheckResult:
    """One verification outcome, renderable as a table row or JSON line."""

    suite: str
    name: str
    passed: bool
    detail: str

    def as_json(self) -> dict:
        return {"suite": self.suite, "name": self.name,
                "passed": self.passed, "detail": self.detail}


def _check_orthonormality() -> list[CheckResult]:
    results = []
    for n in _N_GRID:
        for family in CLASSICAL_FAMILIES:
            tapers = make_tapers(family, 1, n)
            norm_err = abs(float(tapers.tapers[0] @ tapers.tapers[0]) - 1.0)
            results.append(CheckResult(
                suite="orthonormality", name=f"{family.value} N={n} K=1",
                passed=norm_err <= UNIT_NORM_TOL,
                detail=f"norm err {norm_err:.2e}"))
        for family in MULTITAPER_FAMILIES:
            for k in _K_GRID:
                tapers = make_tapers(family, k, n)
                gram = tapers.tapers @ tapers.tapers.T
                norm_err = float(np.max(np.abs(np.diag(gram) - 1.0)))
                cross = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
                results.append(CheckResult(
                    suite="orthonormality", name=f"{family.value} N={n} K={k}",
                    passed=norm_err <= UNIT_NORM_TOL and cross <= ORTHOGONALITY_TOL,
                    detail=f"norm err {norm_err:.2e}, max cross {cross:.2e}"))
    return results


def _direct_swce_weights(k_count: int, n: int, modified: bool) -> list[float]:
    """Scalar re-evaluation of the SWCE weight profile."""
    if k_count == 1:
        return [1.0]
    beta = 0.5 if modified else 1.0
    gap = n // k_count
    raw = [math.cos(math.pi * k * gap / n) + beta for k in range(1, k_count + 1)]
    if modified:
        raw = [r ** 8 for r in raw]
    total = sum(raw)
    return [r / total for r in raw]


def _check_weights() -> list[CheckResult]:
    results = []
    for n in _N_GRID:
        for modified in (False, True):
            label = "swce_mod" if modified else "swce"
            for k in (1,) + _K_GRID:
                produced = swce_weights(k, n, modified=modified)
                direct = np.asarray(_direct_swce_weights(k, n, modified))
                sum_err = abs(float(produced.sum()) - 1.0)
                match_err = float(np.max(np.abs(produced - direct)))
                nonneg = bool(np.all(produced >= 0.0))
                results.append(CheckResult(
                    suite="weights", name=f"{label} N={n} K={k}",
                    passed=nonneg and sum_err <= 1e-12 and match_err <= 1e-12,
                    detail=(f"sum err {sum_err:.2e}, direct-eval err "
                            f"{match_err:.2e}, nonneg {nonneg}")))
    return results


def _check_dft_oracle(frames_per_n: int = 100, seed: int = 2024) -> list[CheckResult]:
    # Import here to keep the oracle module importable without the backend.
    from .spectral import FramingPlan, multitaper_spectrogram

    results = []
    for n in _N_GRID:
        rng = np.random.Generator(np.random.PCG64(seed + n))
        signal = rng.standard_normal(frames_per_n * n)
        for family, k in ((WindowFamily.HANN, 1), (WindowFamily.SWCE, 5)):
            tapers = make_tapers(family, k, n)
            plan = FramingPlan(hop=n, frame_len=n, signal_len=len(signal))
            fast = multitaper_spectrogram(signal, tapers, plan).values
            worst = 0.0
            for tau in range(plan.frame_count):
                frame = signal[tau * n:(tau + 1) * n]
                naive = np.zeros(n // 2 + 1)
                for taper, weight in zip(tapers.tapers, tapers.weights):
                    naive += weight * naive_dft_power(frame, taper)
                floor = 1e-12 * float(naive.mean())
                rel = np.abs(fast[:, tau] - naive) / np.maximum(naive, floor)
                worst = max(worst, float(rel.max()))
            results.append(CheckResult(
                suite="dft", name=f"{family.value} N={n} K={k}",
                passed=worst <= 1e-6,
                detail=f"max relative error {worst:.2e} over "
                       f"{plan.frame_count} frames"))
    return results


def _check_variance(n_frames: int = 10000, seed: int = 7) -> list[CheckResult]:
    results = []
    baseline = mc_variance(make_tapers(WindowFamily.HANN, 1, 320),
                           n_frames, seed)
    err = abs(baseline.measured_rel_var - 1.0)
    results.append(CheckResult(
        suite="variance", name="hann N=320 K=1",
        passed=err <= 0.10,
        detail=f"rel var {baseline.measured_rel_var:.4f} vs 1.0"))
    for family in MULTITAPER_FAMILIES:
        uniform_series = []
        for k in _K_GRID:
            report = mc_variance(make_tapers(family, k, 320), n_frames, seed)
            rel_err = abs(report.measured_rel_var
                          - report.weights_sq_sum) / report.weights_sq_sum
            if family is WindowFamily.HERMITE:
                uniform_series.append(report.measured_rel_var)
            results.append(CheckResult(
                suite="variance", name=f"{family.value} N=320 K={k}",
                passed=rel_err <= 0.15,
                detail=(f"rel var {report.measured_rel_var:.4f} vs analytic "
                        f"{report.weights_sq_sum:.4f} ({rel_err:.1%} off)")))
        if family is WindowFamily.HERMITE:
            decreasing = all(a > b for a, b in
                             zip(uniform_series, uniform_series[1:]))
            results.append(CheckResult(
                suite="variance", name="hermite monotone in K",
                passed=decreasing,
                detail="rel var strictly decreasing over K="
                       f"{list(_K_GRID)}: {decreasing}"))
    return results


_SUITES = {
    "orthonormality": _check_orthonormality,
    "weights": _check_weights,
    "dft": _check_dft_oracle,
    "variance": _check_variance,
}

SUITE_NAMES = tuple(_SUITES) + ("all",)


def run_suites(names, n_frames: int = 10000) -> list[CheckResult]:
    """Run the named verification suites and collect their results.

    ``names`` is an iterable drawn from :data:`SUITE_NAMES`; ``"all"``
    expands to every suite. ``n_frames`` only affects the variance suite.
    """
    selected: list[str] = []
    for name in names:
        if name == "all":
            selected.extend(_SUITES)
        elif name in _SUITES:
            selected.append(name)
        else:
            raise ValueError(
                f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    if not selected:
        raise ValueError(f"no suite selected; choose from {SUITE_NAMES}")
    results: list[CheckResult] = []
    for name in dict.fromkeys(selected):
        if name == "variance":
            results.extend(_SUITES[name](n_frames=n_frames))
        else:
            results.extend(_SUITES[name]())
    return results
