import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import stats

from stcofdm.metrics import (
    PsdEstimate,
    ber_count,
    ccdf,
    ccdf_crossing,
    complexity_counts,
    matches_theory,
    occupied_bandwidth,
    papr_db,
    psd_welch,
    same_ber,
    snr_at_ber,
    theoretical_ber_bpsk,
    wilson_interval,
)
from stcofdm.modem import Scheme, SchemeConfig, transmit


class TestPapr:
    def test_constant_envelope(self):
        x = np.exp(1j * np.linspace(0, 7, 64))
        assert papr_db(x) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("m", [16, 160, 1000])
    def test_impulse(self, m):
        x = np.zeros(m)
        x[5] = 3.0
        assert papr_db(x) == pytest.approx(10 * math.log10(m))

    def test_accepts_frames_and_batches(self):
        cfg = SchemeConfig.default("ofdm")
        f = transmit(np.random.default_rng(0).integers(0, 2, (7, 128)), cfg)
        vals = papr_db(f)
        assert vals.shape == (7,)
        assert isinstance(papr_db(f.samples[0]), float)

    @given(scale=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3), seed=st.integers(0, 1000))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariant(self, scale, seed):
        x = np.random.default_rng(seed).standard_normal(160) + 0j
        assert papr_db(scale * x) == pytest.approx(papr_db(x), abs=1e-9)

    def test_oversampling_never_lowers_peak(self):
        cfg = SchemeConfig.default("stc")
        f = transmit(np.random.default_rng(1).integers(0, 2, (200, 128)), cfg)
        assert np.all(papr_db(f, oversample=4) >= papr_db(f) - 1e-9)

    def test_oversampling_keeps_original_samples(self):
        from stcofdm.metrics import _oversample
        x = np.random.default_rng(2).standard_normal(160) + 1j
        assert_allclose(_oversample(x, 4)[::4], x, atol=1e-12)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            papr_db(np.array([]))
        with pytest.raises(ValueError):
            papr_db(np.ones(4), oversample=0)


class TestCcdf:
    def test_step_function(self):
        t, p = ccdf(np.full(1000, 5.0))
        assert np.all(p[t < 5.0] == 1.0)
        assert np.all(p[t >= 5.0] == 0.0)

    def test_below_minimum_is_one(self):
        vals = np.random.default_rng(0).uniform(3, 9, 2000)
        _, p = ccdf(vals, thresholds=[vals.min() - 1])
        assert p[0] == 1.0

    @given(st.lists(st.floats(0, 20), min_size=1, max_size=300))
    @settings(max_examples=60, deadline=None)
    def test_non_increasing(self, vals):
        t, p = ccdf(vals)
        assert np.all(np.diff(p) <= 0)
        assert p.min() >= 0 and p.max() <= 1
        assert np.allclose(np.diff(t), 0.1)

    def test_crossing(self):
        vals = np.arange(1, 1001) / 100.0
        assert ccdf_crossing(vals, 0.01) == pytest.approx(np.quantile(vals, 0.99))


class TestBer:
    def test_identical(self):
        r = ber_count(np.ones(64), np.ones(64))
        assert (r.errors, r.total, r.ber) == (0, 64, 0.0)
        assert r.ci_low == 0.0 and r.ci_high > 0

    def test_complementary(self):
        a = np.random.default_rng(0).integers(0, 2, 100)
        assert ber_count(a, 1 - a).ber == 1.0

    def test_injected_flips(self):
        a = np.zeros(1000, dtype=int)
        b = a.copy()
        b[[3, 100, 200, 555, 999]] = 1
        r = ber_count(a, b)
        assert r.errors == 5 and r.ber == 0.005

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ber_count(np.ones(3), np.ones(4))

    @pytest.mark.parametrize("k,n", [(0, 10), (5, 1000), (50, 100), (999, 1000)])
    def test_wilson_matches_statsmodels(self, k, n):
        from statsmodels.stats.proportion import proportion_confint
        lo, hi = proportion_confint(k, n, alpha=0.05, method="wilson")
        assert_allclose(wilson_interval(k, n), (lo, hi), atol=1e-12)

    def test_theory_values(self):
        assert theoretical_ber_bpsk(0.0) == pytest.approx(stats.norm.sf(math.sqrt(2)), rel=1e-12)
        assert theoretical_ber_bpsk(0.0) == pytest.approx(0.0786, abs=1e-4)
        assert theoretical_ber_bpsk(-math.inf) == 0.5
        assert theoretical_ber_bpsk(10.5) == pytest.approx(1.1e-6, rel=0.05)
        assert theoretical_ber_bpsk(8.4) == pytest.approx(1.0e-4, rel=0.01)

    def test_binomial_checks(self):
        assert matches_theory(100, 10**6, 1e-4)
        assert not matches_theory(200, 10**6, 1e-4)
        assert same_ber(100, 10**6, 110, 10**6)
        assert not same_ber(100, 10**6, 200, 10**6)
        assert same_ber(0, 10**6, 0, 10**6)

    def test_snr_at_ber(self):
        x = [0, 1, 2, 3]
        y = [1e-1, 1e-2, 1e-3, 0.0]
        assert snr_at_ber(x, y, 10**-1.5) == pytest.approx(0.5)
        assert snr_at_ber(x, y, 10**-2.5) == pytest.approx(1.5)
        assert math.isnan(snr_at_ber(x, y, 1e-6))


class TestPsd:
    def test_white_noise_flat_and_calibrated(self):
        rng = np.random.default_rng(0)
        x = (rng.standard_normal(2**19) + 1j * rng.standard_normal(2**19)) / math.sqrt(2)
        est = psd_welch(x, fs=1.0, segment_len=1024)
        assert est.power_db.max() - est.power_db.min() < 2.0
        assert est.total_power() == pytest.approx(np.mean(np.abs(x) ** 2), rel=0.01)
        assert np.allclose(np.diff(est.freqs), est.bin_width)

    def test_tone_peak_and_width(self):
        fs, n = 1.92e6, 1024
        f0 = 37 * fs / n
        x = np.exp(2j * np.pi * f0 * np.arange(2**16) / fs)
        est = psd_welch(x, fs, n)
        assert est.freqs[np.argmax(est.density)] == pytest.approx(f0)
        assert occupied_bandwidth(est) <= 2 * est.resolution_bw + 1e-6

    def test_brick_wall(self):
        freqs = np.arange(-512, 512) * 100.0
        width = 30_000.0
        dens = np.where(np.abs(freqs) < width / 2, 1.0, 0.0)
        est = PsdEstimate(freqs, dens, 100.0)
        # 99% of a flat band spans 99% of its width
        assert abs(occupied_bandwidth(est, 0.99) - 0.99 * width) <= est.bin_width

    def test_rejects_short_or_bad_segment(self):
        with pytest.raises(ValueError):
            psd_welch(np.ones(100), 1.0, 1024)
        with pytest.raises(ValueError):
            psd_welch(np.ones(5000), 1.0, 1000)
        with pytest.raises(ValueError):
            occupied_bandwidth(PsdEstimate(np.arange(4.0), np.ones(4), 1.0), 1.0)

    def test_stc_half_of_ofdm(self):
        rng = np.random.default_rng(3)
        bws = {}
        for s in (Scheme.OFDM, Scheme.STC_OFDM):
            cfg = SchemeConfig.default(s)
            bits = rng.integers(0, 2, (2000, cfg.bits_per_frame))
            est = psd_welch(transmit(bits, cfg).samples.ravel(), cfg.sampling_rate)
            bws[s] = occupied_bandwidth(est)
        assert bws[Scheme.STC_OFDM] / bws[Scheme.OFDM] == pytest.approx(0.5, abs=0.05)


def closed_forms(row, n):
    """Closed forms evaluated in floating point, independently of the integer path."""
    lg, lg_half = math.log2(n), math.log2(n / 2)
    return {
        "ofdm": (2 * n * lg - 2 * n, 3 * n * lg - n),
        "fast": (2 * n * lg - 2 * n, 3 * n * lg - n),
        "stc": (n * lg_half - n, 1.5 * n * lg_half - n / 2),
        "dual": (2 * n * lg - 2 * n, 3 * n * lg - n),
        "dual_mulaw": (2 * n * lg - n, 3 * n * lg + 3 * n),
    }[row]


class TestComplexity:
    def test_worked_examples(self):
        r = complexity_counts("ofdm", 128)
        assert (r.multiplications, r.additions) == (1536, 2560)
        r = complexity_counts("stc", 128)
        assert (r.multiplications, r.additions) == (640, 1088)
        r = complexity_counts("dual", 128)
        assert (r.multiplications, r.additions) == (1536, 2560)

    @pytest.mark.parametrize("row", ["ofdm", "fast", "stc", "dual", "dual_mulaw"])
    @pytest.mark.parametrize("n", [2, 4, 64, 128, 256, 4096])
    def test_formulas(self, row, n):
        r = complexity_counts(row, n)
        assert (r.multiplications, r.additions) == closed_forms(row, n)

    def test_accepts_scheme_enum(self):
        assert complexity_counts(Scheme.STC_OFDM, 64).scheme == "stc"

    def test_rejects(self):
        with pytest.raises(ValueError):
            complexity_counts("ofdm", 100)
        with pytest.raises(ValueError):
            complexity_counts("sefdm", 64)
