"""Timing harness, linear fits, and CSV report format."""

import os

import numpy as np
import pytest

from mtmel.bench import (
    CSV_COLUMNS,
    LinearFit,
    TimingRecord,
    _pinned_to_one_cpu,
    fit_linear,
    format_csv,
    time_feature_extraction,
)
from mtmel.config import FeatureConfig
from mtmel.windows import WindowFamily, WindowKind

_SWCE = WindowKind(WindowFamily.SWCE)


def _record(k, mean_ms, std_ms=0.01, reps=10):
    return TimingRecord(k=k, window_kind=_SWCE, setup_name="A",
                        mean_ms=mean_ms, std_ms=std_ms, reps=reps)


class TestTimingRecord:
    def test_rejects_low_reps(self):
        with pytest.raises(ValueError, match="reps below minimum"):
            _record(3, 1.0, reps=9)

    def test_rejects_nonpositive_mean(self):
        with pytest.raises(ValueError, match="mean_ms"):
            _record(3, 0.0)

    def test_rejects_negative_std(self):
        with pytest.raises(ValueError, match="std_ms"):
            _record(3, 1.0, std_ms=-0.5)


class TestLinearFit:
    def test_rejects_r_squared_out_of_range(self):
        with pytest.raises(ValueError, match="r_squared"):
            LinearFit(slope=1.0, intercept=0.0, r_squared=1.5)

    def test_exact_collinear_data(self):
        records = [_record(k, 2.0 + 0.5 * k) for k in (3, 4, 5, 6)]
        fit = fit_linear(records)
        assert abs(fit.slope - 0.5) <= 1e-12
        assert abs(fit.intercept - 2.0) <= 1e-12
        assert abs(fit.r_squared - 1.0) <= 1e-12

    def test_constant_response_reports_zero(self):
        fit = fit_linear([_record(k, 1.0) for k in (3, 4, 5)])
        assert fit.slope == 0.0
        assert fit.r_squared == 0.0

    def test_too_few_distinct_k(self):
        records = [_record(3, 1.0), _record(3, 1.1), _record(4, 1.2)]
        with pytest.raises(ValueError, match="need >=3 distinct K for fit, got 2"):
            fit_linear(records)


class TestTimeFeatureExtraction:
    def test_rejects_low_reps(self, chirp_buffer):
        cfg = FeatureConfig.from_setup("D", window="swce")
        with pytest.raises(ValueError, match="reps below minimum"):
            time_feature_extraction(chirp_buffer, cfg, [3], reps=1)

    def test_rejects_empty_k_values(self, chirp_buffer):
        cfg = FeatureConfig.from_setup("D", window="swce")
        with pytest.raises(ValueError, match="k_values"):
            time_feature_extraction(chirp_buffer, cfg, [], reps=10)

    def test_fails_fast_on_invalid_pair(self, chirp_buffer):
        cfg = FeatureConfig.from_setup("D", window="hann")
        with pytest.raises(ValueError):
            time_feature_extraction(chirp_buffer, cfg, [3], reps=10)

    def test_record_schema(self, chirp_buffer):
        cfg = FeatureConfig.from_setup("D", window="swce")
        records = time_feature_extraction(chirp_buffer, cfg, [3, 5], reps=10,
                                          warmup=1)
        assert [r.k for r in records] == [3, 5]
        for r in records:
            assert r.window_kind == cfg.window
            assert r.setup_name == "D"
            assert r.mean_ms > 0.0
            assert r.std_ms >= 0.0
            assert r.reps == 10

    def test_amortized_path_runs(self, chirp_buffer):
        cfg = FeatureConfig.from_setup("D", window="hermite")
        records = time_feature_extraction(chirp_buffer, cfg, [3, 4], reps=10,
                                          warmup=1, amortize_tapers=True)
        assert len(records) == 2
        assert all(r.mean_ms > 0.0 for r in records)

    def test_cost_rank_tracks_taper_count(self, chirp_buffer):
        # Spearman rank correlation between mean time and K.
        cfg = FeatureConfig.from_setup("A", window="hermite")
        k_values = list(range(3, 11))
        records = time_feature_extraction(chirp_buffer, cfg, k_values,
                                          reps=25, warmup=2)
        means = np.array([r.mean_ms for r in records])
        ranks = np.argsort(np.argsort(means)).astype(float)
        k_ranks = np.argsort(np.argsort(k_values)).astype(float)
        spearman = float(np.corrcoef(ranks, k_ranks)[0, 1])
        assert spearman >= 0.8


class TestPinning:
    def test_affinity_restored(self):
        if not hasattr(os, "sched_getaffinity"):
            pytest.skip("no affinity API on this platform")
        before = os.sched_getaffinity(0)
        with _pinned_to_one_cpu() as pinned:
            if pinned:
                assert len(os.sched_getaffinity(0)) == 1
        assert os.sched_getaffinity(0) == before


class TestFormatCsv:
    def test_columns_and_rows(self):
        records = [_record(3, 1.5), _record(5, 2.5)]
        text = format_csv(records, metadata={"backend": "pure"})
        lines = text.splitlines()
        assert lines[0] == "# backend=pure"
        assert lines[1] == ",".join(CSV_COLUMNS)
        cells = lines[2].split(",")
        assert cells[0] == "swce"
        assert cells[1] == "A"
        assert cells[2] == "3"
        assert float(cells[3]) == 1.5
        assert int(cells[5]) == 10

    def test_fit_comment_round_trips(self):
        records = [_record(k, 2.0 + 0.5 * k) for k in (3, 4, 5)]
        fit = fit_linear(records)
        text = format_csv(records, fits={"swce": fit})
        fit_lines = [ln for ln in text.splitlines() if ln.startswith("# fit")]
        assert len(fit_lines) == 1
        assert "window=swce" in fit_lines[0]
        slope_cell = fit_lines[0].split("slope_ms_per_k=")[1].split()[0]
        assert float(slope_cell) == fit.slope
