"""Tapers and windows: shapes, normalization, known values, validation."""

import math

import numpy as np
import pytest

from mtmel.windows import (
    CLASSICAL_FAMILIES,
    DEFAULT_KAISER_BETA,
    MAX_HERMITE_COUNT,
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

K_GRID = (3, 5, 7, 10)
N_GRID = (320, 640)


def _bessel_i0(x: float) -> float:
    # Independent modified Bessel I0: power series with term recurrence
    # t_m = t_{m-1} * (x^2/4) / m^2, summed to convergence.
    term, total, m = 1.0, 1.0, 0
    quarter_sq = x * x / 4.0
    while term > 1e-18 * total:
        m += 1
        term *= quarter_sq / (m * m)
        total += term
    return total


class TestClassical:
    def test_boxcar_n4_normalized(self):
        taper = make_classical_window("boxcar", 4).tapers[0]
        assert np.array_equal(taper, [0.5, 0.5, 0.5, 0.5])

    @pytest.mark.parametrize("family", [f.value for f in CLASSICAL_FAMILIES])
    @pytest.mark.parametrize("n", N_GRID)
    def test_periodic_formula(self, family, n):
        # Scalar re-evaluation of each periodic window definition.
        def raw(i):
            x = 2.0 * math.pi * i / n
            if family == "hann":
                return 0.5 - 0.5 * math.cos(x)
            if family == "hamming":
                return 0.54 - 0.46 * math.cos(x)
            if family == "bartlett":
                return 1.0 - abs(2.0 * i / n - 1.0)
            if family == "boxcar":
                return 1.0
            beta = DEFAULT_KAISER_BETA
            arg = 1.0 - (2.0 * i / n - 1.0) ** 2
            return _bessel_i0(beta * math.sqrt(arg)) / _bessel_i0(beta)

        expected = np.array([raw(i) for i in range(n)])
        expected /= math.sqrt(float(expected @ expected))
        got = make_classical_window(family, n).tapers[0]
        assert np.max(np.abs(got - expected)) <= 1e-12

    def test_kaiser_beta_flows_through(self):
        a = make_classical_window(WindowKind(WindowFamily.KAISER, 2.0), 64)
        b = make_classical_window(WindowKind(WindowFamily.KAISER, 12.0), 64)
        assert not np.allclose(a.tapers, b.tapers)
        # Larger beta concentrates the window: smaller edge values.
        assert b.tapers[0, 0] < a.tapers[0, 0]

    def test_kaiser_beta_validation(self):
        with pytest.raises(ValueError, match="kaiser_beta"):
            WindowKind(WindowFamily.KAISER, 0.0)
        with pytest.raises(ValueError, match="kaiser_beta"):
            WindowKind(WindowFamily.KAISER, math.inf)

    def test_periodic_symmetry(self):
        # Periodic windows satisfy w[i] == w[n - i] for i >= 1.
        for family in ("hann", "hamming", "bartlett", "kaiser"):
            w = make_classical_window(family, 64).tapers[0]
            assert np.max(np.abs(w[1:] - w[1:][::-1])) <= 1e-15, family

    def test_short_frame_rejected(self):
        with pytest.raises(ValueError, match="frame length"):
            make_classical_window("hann", 1)

    def test_weights_are_unit(self):
        assert np.array_equal(make_classical_window("hann", 32).weights, [1.0])


class TestHermite:
    def test_first_taper_is_gaussian_bell(self):
        taper = make_hermite_tapers(1, 321).tapers[0]
        assert taper[160] == taper.max()
        assert np.max(np.abs(taper - taper[::-1])) <= 1e-12
        assert np.all(taper > 0.0)

    @pytest.mark.parametrize("k", K_GRID)
    @pytest.mark.parametrize("n", N_GRID)
    def test_orthonormal(self, k, n):
        tapers = make_hermite_tapers(k, n).tapers
        gram = tapers @ tapers.T
        assert np.max(np.abs(gram - np.eye(k))) <= 1e-9

    def test_qr_is_near_identity_on_samples(self):
        # Row-normalized samples are already near-orthonormal; the QR
        # cleanup must not reshape them, only nudge.
        from mtmel.windows import _hermite_samples

        raw = _hermite_samples(5, 640)
        raw = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        fixed = make_hermite_tapers(5, 640).tapers
        assert np.max(np.abs(raw - fixed)) <= 1e-6

    def test_uniform_weights(self):
        weights = make_hermite_tapers(4, 320).weights
        assert np.array_equal(weights, np.full(4, 0.25))

    def test_k_limit(self):
        make_hermite_tapers(MAX_HERMITE_COUNT, 320)
        with pytest.raises(ValueError, match="k_count"):
            make_hermite_tapers(MAX_HERMITE_COUNT + 1, 320)
        with pytest.raises(ValueError, match="k_count"):
            make_hermite_tapers(0, 320)


class TestSwce:
    def test_known_samples_k1_n3(self):
        taper = make_swce_tapers(1, 3).tapers[0]
        expected = [0.5, math.sqrt(2.0) / 2.0, 0.5]
        assert np.max(np.abs(taper - expected)) <= 1e-15

    @pytest.mark.parametrize("k", K_GRID)
    @pytest.mark.parametrize("n", N_GRID)
    def test_orthonormal(self, k, n):
        tapers = make_swce_tapers(k, n).tapers
        gram = tapers @ tapers.T
        assert np.max(np.abs(gram - np.eye(k))) <= 1e-12

    def test_modified_tapers_equal_original(self):
        # The unit-norm contract divides the modified variant's K gain back
        # out, so only the weights differ.
        original = make_swce_tapers(5, 320)
        modified = make_swce_tapers(5, 320, modified=True)
        assert np.max(np.abs(original.tapers - modified.tapers)) <= 1e-9
        assert not np.allclose(original.weights, modified.weights)

    def test_sine_rows_survive_qr(self):
        # The sine basis is exactly orthonormal, so QR must be an identity
        # up to rounding.
        from mtmel.windows import _swce_samples

        raw = _swce_samples(7, 640, math.sqrt(2.0 / 641.0))
        assert np.max(np.abs(make_swce_tapers(7, 640).tapers - raw)) <= 1e-9


class TestSwceWeights:
    def test_known_values_k5_n640(self):
        weights = swce_weights(5, 640)
        expected = [0.452254, 0.327254, 0.172746, 0.047746, 0.0]
        assert np.max(np.abs(weights - expected)) <= 1e-6

    def test_k1_defined_directly(self):
        assert np.array_equal(swce_weights(1, 320), [1.0])
        assert np.array_equal(swce_weights(1, 320, modified=True), [1.0])

    @pytest.mark.parametrize("modified", [False, True])
    @pytest.mark.parametrize("k", (1, 2) + K_GRID)
    @pytest.mark.parametrize("n", N_GRID)
    def test_nonnegative_and_normalized(self, modified, k, n):
        weights = swce_weights(k, n, modified=modified)
        assert weights.shape == (k,)
        assert np.all(weights >= 0.0)
        assert abs(float(weights.sum()) - 1.0) <= 1e-12

    def test_modified_concentrates_low_orders(self):
        original = swce_weights(5, 640)
        modified = swce_weights(5, 640, modified=True)
        assert modified[0] > original[0]

    def test_k_bounds(self):
        with pytest.raises(ValueError, match="k_count"):
            swce_weights(0, 320)
        with pytest.raises(ValueError, match="k_count"):
            swce_weights(321, 320)


class TestTaperSetInvariants:
    def test_rejects_non_unit_rows(self):
        rows = np.eye(2, 8) * 2.0
        with pytest.raises(ValueError, match="unit-norm"):
            TaperSet(tapers=rows, weights=[0.5, 0.5],
                     kind=WindowKind(WindowFamily.SWCE), frame_len=8)

    def test_rejects_non_orthogonal_rows(self):
        row = np.full(8, 1.0 / math.sqrt(8.0))
        rows = np.stack([row, row])
        with pytest.raises(ValueError, match="orthogonal"):
            TaperSet(tapers=rows, weights=[0.5, 0.5],
                     kind=WindowKind(WindowFamily.SWCE), frame_len=8)

    def test_rejects_negative_weights(self):
        tapers = make_swce_tapers(2, 8).tapers
        with pytest.raises(ValueError, match="nonnegative"):
            TaperSet(tapers=tapers, weights=[1.5, -0.5],
                     kind=WindowKind(WindowFamily.SWCE), frame_len=8)

    def test_rejects_weight_count_mismatch(self):
        tapers = make_swce_tapers(2, 8).tapers
        with pytest.raises(ValueError, match="weights"):
            TaperSet(tapers=tapers, weights=[1.0],
                     kind=WindowKind(WindowFamily.SWCE), frame_len=8)

    def test_arrays_are_read_only(self):
        tapers = make_swce_tapers(2, 8)
        with pytest.raises(ValueError):
            tapers.tapers[0, 0] = 1.0
        with pytest.raises(ValueError):
            tapers.weights[0] = 1.0


class TestMakeTapers:
    def test_classical_requires_k1(self):
        with pytest.raises(ValueError, match="k must be 1"):
            make_tapers("hann", 3, 320)

    @pytest.mark.parametrize("family", [f.value for f in MULTITAPER_FAMILIES])
    def test_multitaper_dispatch(self, family):
        tapers = make_tapers(family, 4, 320)
        assert tapers.k == 4
        assert tapers.kind.family.value == family

    def test_string_and_kind_agree(self):
        via_str = make_tapers("hermite", 3, 320)
        via_kind = make_tapers(WindowKind(WindowFamily.HERMITE), 3, 320)
        assert np.array_equal(via_str.tapers, via_kind.tapers)
