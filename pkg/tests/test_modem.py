import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from stcofdm.modem import (
    Scheme,
    SchemeConfig,
    add_cp,
    body_samples,
    dual_stc_rx,
    dual_stc_tx,
    fast_ofdm_rx,
    fast_ofdm_tx,
    ofdm_rx,
    ofdm_tx,
    receive,
    remove_cp,
    stc_ofdm_rx,
    stc_ofdm_tx,
    transmit,
)
from stcofdm.stc_codec import PayloadSizeError

CFG = {s: SchemeConfig.default(s) for s in Scheme}


def rand_bits(n, batch=(), seed=0):
    return np.random.default_rng(seed).integers(0, 2, (*batch, n), dtype=np.uint8)


class TestConfig:
    def test_defaults(self):
        assert (CFG[Scheme.OFDM].fft_size, CFG[Scheme.OFDM].cp_len) == (128, 32)
        assert CFG[Scheme.OFDM].subcarrier_spacing == 15e3
        assert CFG[Scheme.FAST_OFDM].subcarrier_spacing == 7.5e3
        assert (CFG[Scheme.STC_OFDM].fft_size, CFG[Scheme.STC_OFDM].cp_len) == (64, 16)

    def test_sampling_rates(self):
        assert CFG[Scheme.OFDM].sampling_rate == 1.92e6
        assert CFG[Scheme.STC_OFDM].sampling_rate == 0.96e6
        assert CFG[Scheme.FAST_OFDM].sampling_rate == 1.92e6
        assert CFG[Scheme.DUAL_STC].sampling_rate == 1.92e6

    @pytest.mark.parametrize("kw", [
        dict(fft_size=100), dict(cp_len=128), dict(cp_len=-1), dict(mu=-1.0),
        dict(subcarrier_spacing=0.0),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SchemeConfig.default("ofdm", **kw)

    def test_scheme_aliases(self):
        assert Scheme.parse("STC-OFDM") is Scheme.STC_OFDM
        assert Scheme.parse("proposed") is Scheme.DUAL_STC
        with pytest.raises(ValueError):
            Scheme.parse("sefdm")


class TestCyclicPrefix:
    def test_example(self):
        assert list(add_cp(np.array(list("abcd")), 2)) == list("cdabcd")
        assert list(add_cp(np.array(list("abcd")), 0)) == list("abcd")

    def test_inverse(self):
        x = np.arange(16.0)
        assert_array_equal(remove_cp(add_cp(x, 5), 5), x)

    def test_too_long(self):
        with pytest.raises(ValueError):
            add_cp(np.ones(4), 4)


FRAME_LENGTHS = {Scheme.OFDM: 160, Scheme.FAST_OFDM: 160, Scheme.STC_OFDM: 80, Scheme.DUAL_STC: 160}
BITS_PER_FRAME = {Scheme.OFDM: 128, Scheme.FAST_OFDM: 128, Scheme.STC_OFDM: 128, Scheme.DUAL_STC: 256}


@pytest.mark.parametrize("scheme", list(Scheme))
class TestAllSchemes:
    def test_accounting(self, scheme):
        cfg = CFG[scheme]
        assert cfg.bits_per_frame == BITS_PER_FRAME[scheme]
        frame = transmit(rand_bits(cfg.bits_per_frame), cfg)
        assert len(frame) == FRAME_LENGTHS[scheme] == cfg.frame_length
        assert frame.scheme is scheme

    def test_noiseless_round_trip(self, scheme):
        cfg = CFG[scheme]
        bits = rand_bits(cfg.bits_per_frame, batch=(50,), seed=3)
        assert_array_equal(receive(transmit(bits, cfg), cfg), bits)

    def test_cp_property(self, scheme):
        cfg = CFG[scheme]
        x = transmit(rand_bits(cfg.bits_per_frame, batch=(4,)), cfg).samples
        halves = [x] if scheme is not Scheme.DUAL_STC else [x[:, :80], x[:, 80:]]
        cp = cfg.cp_len if scheme is not Scheme.DUAL_STC else cfg.cp_len // 2
        for h in halves:
            assert_array_equal(h[:, :cp], h[:, -cp:])

    def test_wrong_payload(self, scheme):
        cfg = CFG[scheme]
        with pytest.raises(PayloadSizeError):
            transmit(rand_bits(cfg.bits_per_frame - 2), cfg)

    def test_body_strips_every_prefix(self, scheme):
        cfg = CFG[scheme]
        frame = transmit(rand_bits(cfg.bits_per_frame), cfg)
        assert body_samples(frame, cfg).shape[-1] == cfg.useful_samples


class TestOfdm:
    def test_frame_size(self):
        assert ofdm_tx(rand_bits(128), CFG[Scheme.OFDM]).samples.shape == (160,)

    def test_all_ones_is_impulse(self):
        cfg = CFG[Scheme.OFDM]
        frame = ofdm_tx(np.ones(128, dtype=int), cfg)
        body = frame.samples[32:]
        assert body[0] == pytest.approx(1.0)
        assert np.max(np.abs(body[1:])) < 1e-15
        assert_array_equal(ofdm_rx(frame, cfg), np.ones(128))


class TestStc:
    def test_frame_size(self):
        assert len(stc_ofdm_tx(rand_bits(128), CFG[Scheme.STC_OFDM])) == 80

    def test_same_bits_half_the_samples(self):
        bits = rand_bits(128, seed=11)
        f_ofdm = ofdm_tx(bits, CFG[Scheme.OFDM])
        f_stc = stc_ofdm_tx(bits, CFG[Scheme.STC_OFDM])
        assert_array_equal(ofdm_rx(f_ofdm, CFG[Scheme.OFDM]), stc_ofdm_rx(f_stc, CFG[Scheme.STC_OFDM]))
        assert len(f_stc) / len(f_ofdm) == 0.5


class TestDual:
    def test_two_sources(self):
        cfg = CFG[Scheme.DUAL_STC]
        a, b = rand_bits(128, seed=1), rand_bits(128, seed=2)
        frame = dual_stc_tx(a, b, cfg)
        assert len(frame) == 160
        ra, rb = dual_stc_rx(frame, cfg)
        assert_array_equal(ra, a)
        assert_array_equal(rb, b)

    def test_halves_are_stc_frames(self):
        a, b = rand_bits(128, seed=4), rand_bits(128, seed=5)
        frame = dual_stc_tx(a, b, CFG[Scheme.DUAL_STC])
        stc = SchemeConfig.default("stc")
        assert_allclose(frame.samples[:80], stc_ofdm_tx(a, stc).samples)
        assert_allclose(frame.samples[80:], stc_ofdm_tx(b, stc).samples)

    def test_throughput_ratio(self):
        dual, ofdm = CFG[Scheme.DUAL_STC], CFG[Scheme.OFDM]
        assert dual.frame_length == ofdm.frame_length
        assert dual.frame_duration == ofdm.frame_duration
        assert dual.bits_per_frame / ofdm.bits_per_frame == 2.0

    def test_unequal_sources(self):
        with pytest.raises(PayloadSizeError):
            dual_stc_tx(rand_bits(128), rand_bits(64), CFG[Scheme.DUAL_STC])


def fast_basis(m):
    """Sub-carrier waveforms written out from their definition."""
    k = np.arange(m)[:, None]
    n = np.arange(m)[None, :]
    return np.exp(1j * np.pi * (2 * k + 1) * (n - m / 2) / (2 * m)) / np.sqrt(m)


class TestFastOfdm:
    @pytest.mark.parametrize("m", [4, 16, 128])
    def test_basis_orthonormal_under_real_correlation(self, m):
        b = fast_basis(m)
        gram = np.real(b.conj().T @ b)
        assert_allclose(gram, np.eye(m), atol=1e-12)

    def test_literal_half_spacing_bank_is_not_orthogonal(self):
        m = 16
        k = np.arange(m)[:, None]
        n = np.arange(m)[None, :]
        b = np.exp(1j * np.pi * k * n / m) / np.sqrt(m)
        gram = np.real(b.conj().T @ b)
        assert np.max(np.abs(gram - np.eye(m))) > 0.05

    def test_synthesis_matches_definition(self):
        cfg = CFG[Scheme.FAST_OFDM]
        bits = rand_bits(128, seed=7)
        frame = fast_ofdm_tx(bits, cfg)
        expected = fast_basis(128) @ (2.0 * bits - 1)
        assert_allclose(frame.samples[32:], expected, atol=1e-12)

    def test_spacing_is_half_of_ofdm(self):
        cfg = CFG[Scheme.FAST_OFDM]
        # adjacent carriers are 1/(2N) cycles per sample apart
        assert cfg.sampling_rate / (2 * cfg.fft_size) == 7.5e3
        ofdm = CFG[Scheme.OFDM]
        assert ofdm.sampling_rate / ofdm.fft_size == 15e3

    @pytest.mark.parametrize("basis", ["complex", "dct"])
    def test_round_trip(self, basis):
        cfg = CFG[Scheme.FAST_OFDM]
        bits = rand_bits(128, batch=(20,), seed=8)
        assert_array_equal(fast_ofdm_rx(fast_ofdm_tx(bits, cfg, basis), cfg, basis), bits)

    def test_unknown_basis(self):
        with pytest.raises(ValueError):
            fast_ofdm_tx(rand_bits(128), CFG[Scheme.FAST_OFDM], basis="sine")


@given(seed=st.integers(0, 2**32 - 1), scheme=st.sampled_from(list(Scheme)))
@settings(max_examples=40, deadline=None)
def test_round_trip_property(seed, scheme):
    cfg = CFG[scheme]
    bits = rand_bits(cfg.bits_per_frame, seed=seed)
    assert_array_equal(receive(transmit(bits, cfg), cfg), bits)
