"""Framing arithmetic, spectrogram paths, kernel backends, DFT oracle."""

import numpy as np
import pytest

from mtmel import backend
from mtmel.audio import AudioBuffer
from mtmel.errors import SignalTooShortError
from mtmel.spectral import (
    FramingPlan,
    SpectrogramMatrix,
    frame_signal,
    multitaper_spectrogram,
    naive_dft_power,
    single_taper_spectrogram,
)
from mtmel.windows import WindowFamily, WindowKind, make_classical_window, make_tapers


class TestFramingPlan:
    @pytest.mark.parametrize("signal_len,frame_len,hop,expected", [
        (16000, 640, 320, 49),
        (16000, 320, 320, 50),
        (16000, 640, 640, 25),
        (640, 640, 320, 1),
        (639, 640, 320, 0),
        (0, 640, 320, 0),
        (1000, 100, 1, 901),
    ])
    def test_counts(self, signal_len, frame_len, hop, expected):
        plan = FramingPlan.for_signal(signal_len, frame_len, hop)
        assert plan.frame_count == expected

    def test_count_matches_exhaustive_walk(self):
        # Brute force: count the starts whose frame fits entirely.
        for signal_len in range(0, 50):
            for frame_len in (1, 3, 8):
                for hop in (1, 2, 5):
                    walked = len([s for s in range(0, max(signal_len, 1), hop)
                                  if s + frame_len <= signal_len])
                    plan = FramingPlan.for_signal(signal_len, frame_len, hop)
                    assert plan.frame_count == walked

    def test_validation(self):
        with pytest.raises(ValueError, match="hop"):
            FramingPlan(hop=0, frame_len=4, signal_len=10)
        with pytest.raises(ValueError, match="frame_len"):
            FramingPlan(hop=1, frame_len=0, signal_len=10)


class TestFrameSignal:
    def test_frames_are_hop_slices(self, rng):
        x = rng.standard_normal(100)
        plan = FramingPlan.for_signal(100, 16, 7)
        frames = frame_signal(x, plan)
        assert frames.shape == (plan.frame_count, 16)
        for tau in range(plan.frame_count):
            assert np.array_equal(frames[tau], x[7 * tau:7 * tau + 16])

    def test_too_short_raises(self):
        plan = FramingPlan.for_signal(10, 16, 4)
        with pytest.raises(SignalTooShortError):
            frame_signal(np.zeros(10), plan)

    def test_length_mismatch_raises(self):
        plan = FramingPlan.for_signal(100, 16, 7)
        with pytest.raises(ValueError, match="expects"):
            frame_signal(np.zeros(99), plan)


class TestSpectrogramPaths:
    def test_shape_and_nonnegativity(self, rng, each_backend):
        x = rng.standard_normal(3000)
        tapers = make_tapers("hermite", 3, 320)
        plan = FramingPlan.for_signal(3000, 320, 160)
        spec = multitaper_spectrogram(x, tapers, plan)
        assert spec.values.shape == (161, plan.frame_count)
        assert spec.values.min() >= 0.0
        assert spec.k_used == 3
        assert spec.taper_kind == WindowKind(WindowFamily.HERMITE)

    def test_single_taper_equals_k1_multitaper(self, rng):
        x = rng.standard_normal(2000)
        plan = FramingPlan.for_signal(2000, 320, 320)
        tset = make_classical_window("hamming", 320)
        multi = multitaper_spectrogram(x, tset, plan)
        single = single_taper_spectrogram(x, tset.tapers[0], plan)
        assert np.array_equal(multi.values, single.values)

    def test_multitaper_is_weighted_sum_of_single(self, rng):
        x = rng.standard_normal(1600)
        plan = FramingPlan.for_signal(1600, 320, 160)
        tapers = make_tapers("swce", 4, 320)
        combined = multitaper_spectrogram(x, tapers, plan).values
        manual = np.zeros_like(combined)
        for taper, weight in zip(tapers.tapers, tapers.weights):
            manual += weight * single_taper_spectrogram(x, taper, plan).values
        rel = np.abs(combined - manual) / np.maximum(manual, 1e-12 * manual.mean())
        assert rel.max() <= 1e-12

    def test_audio_buffer_input_carries_rate(self, rng):
        buf = AudioBuffer(samples=rng.standard_normal(1000) * 0.1,
                          sample_rate=16000)
        plan = FramingPlan.for_signal(1000, 320, 320)
        spec = multitaper_spectrogram(buf, tapers=make_tapers("hann", 1, 320),
                                      plan=plan)
        assert spec.sample_rate == 16000

    def test_taper_plan_mismatch(self, rng):
        x = rng.standard_normal(1000)
        plan = FramingPlan.for_signal(1000, 320, 320)
        with pytest.raises(ValueError, match="frame_len"):
            multitaper_spectrogram(x, make_tapers("hann", 1, 640), plan)

    def test_negative_values_rejected(self):
        plan = FramingPlan.for_signal(320, 320, 320)
        with pytest.raises(ValueError, match="nonnegative"):
            SpectrogramMatrix(values=np.full((161, 1), -1.0), sample_rate=16000,
                              plan=plan, taper_kind=None, k_used=1)


class TestBackends:
    def test_backends_agree(self, rng):
        if "compiled" not in backend.available_backends():
            pytest.skip("compiled backend not built")
        x = rng.standard_normal(4000)
        tapers = make_tapers("hermite", 5, 640)
        plan = FramingPlan.for_signal(4000, 640, 320)
        outs = {}
        for name in ("compiled", "pure"):
            backend.set_backend(name)
            try:
                outs[name] = multitaper_spectrogram(x, tapers, plan).values
            finally:
                backend.set_backend(None)
        diff = np.abs(outs["compiled"] - outs["pure"])
        assert diff.max() <= 1e-10 * outs["pure"].mean()

    def test_set_backend_validates(self):
        with pytest.raises(ValueError, match="backend"):
            backend.set_backend("fortran")

    def test_forced_compiled_without_extension(self, monkeypatch):
        monkeypatch.setattr(backend, "_compiled", None)
        backend.set_backend("compiled")
        try:
            with pytest.raises(RuntimeError, match="compiled backend"):
                backend.weighted_power(np.zeros(320), np.full((1, 320), 1.0 / 320),
                                       np.array([1.0]), 320, 1)
        finally:
            backend.set_backend(None)

    def test_weighted_power_validation(self):
        taper = np.full((1, 16), 0.25)
        with pytest.raises(ValueError, match="too short"):
            backend.weighted_power(np.zeros(10), taper, np.array([1.0]), 4, 2)
        with pytest.raises(ValueError, match="weights"):
            backend.weighted_power(np.zeros(32), taper, np.array([0.5, 0.5]), 4, 2)


class TestNaiveDftOracle:
    def test_matches_numpy_fft(self, rng):
        # Sanity-check the oracle itself against an unrelated FFT.
        frame = rng.standard_normal(64)
        taper = make_classical_window("hann", 64).tapers[0]
        naive = naive_dft_power(frame, taper)
        via_fft = np.abs(np.fft.rfft(frame * taper)) ** 2
        assert np.max(np.abs(naive - via_fft)) <= 1e-10 * via_fft.max()

    def test_parseval(self, rng):
        # One-sided power accounts for conjugate bins: sum of two-sided
        # power equals N * energy of the windowed frame.
        frame = rng.standard_normal(64)
        taper = make_classical_window("boxcar", 64).tapers[0]
        power = naive_dft_power(frame, taper)
        two_sided = power[0] + power[-1] + 2.0 * power[1:-1].sum()
        energy = float(np.sum((frame * taper) ** 2))
        assert abs(two_sided - 64.0 * energy) <= 1e-9 * two_sided

    def test_shape_validation(self):
        with pytest.raises(ValueError, match="equal-length"):
            naive_dft_power(np.zeros(8), np.zeros(9))
