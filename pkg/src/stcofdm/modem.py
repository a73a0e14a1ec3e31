"""Transmit/receive chains for OFDM, Fast-OFDM, STC-OFDM and dual-STC.

Every chain is BPSK at the bit level and works on batches: ``bits`` may have
any number of leading axes and the frame samples keep them. All sub-carriers
carry data (no DC null, no guard bins) and the receiver applies no
equalisation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import stc_codec
from .stc_codec import PayloadSizeError
from .transforms import (
    forward_dft,
    inverse_dft,
    inverse_orthonormal_dct,
    is_power_of_two,
    orthonormal_dct,
)


class Scheme(str, Enum):
    OFDM = "ofdm"
    FAST_OFDM = "fast"
    STC_OFDM = "stc"
    DUAL_STC = "dual"

    @classmethod
    def parse(cls, name: "str | Scheme") -> "Scheme":
        if isinstance(name, Scheme):
            return name
        key = name.strip().lower().replace("-", "_")
        aliases = {
            "ofdm": cls.OFDM,
            "fast": cls.FAST_OFDM,
            "fast_ofdm": cls.FAST_OFDM,
            "stc": cls.STC_OFDM,
            "stc_ofdm": cls.STC_OFDM,
            "dual": cls.DUAL_STC,
            "dual_stc": cls.DUAL_STC,
            "proposed": cls.DUAL_STC,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown scheme {name!r}") from None


# (fft_size, cp_len, subcarrier spacing in Hz)
DEFAULTS = {
    Scheme.OFDM: (128, 32, 15e3),
    Scheme.FAST_OFDM: (128, 32, 7.5e3),
    Scheme.STC_OFDM: (64, 16, 15e3),
    Scheme.DUAL_STC: (128, 32, 15e3),
}


@dataclass(frozen=True)
class SchemeConfig:
    """Physical parameters of one waveform.

    For ``DUAL_STC`` the ``fft_size`` and ``cp_len`` describe the whole
    frame; each source uses an STC symbol of half that size.
    """

    scheme: Scheme
    fft_size: int
    cp_len: int
    subcarrier_spacing: float
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not is_power_of_two(self.fft_size):
            raise ValueError(f"fft_size must be a power of two, got {self.fft_size}")
        if not 0 <= self.cp_len < self.fft_size:
            raise ValueError(f"cp_len must satisfy 0 <= cp_len < fft_size, got {self.cp_len}")
        if self.scheme is Scheme.DUAL_STC and (self.fft_size < 4 or self.cp_len % 2):
            raise ValueError("dual-STC needs fft_size >= 4 and an even cp_len")
        if self.subcarrier_spacing <= 0:
            raise ValueError("subcarrier_spacing must be positive")
        if self.mu < 0:
            raise ValueError("mu must be >= 0")

    @classmethod
    def default(cls, scheme, **overrides) -> "SchemeConfig":
        scheme = Scheme.parse(scheme)
        n, cp, df = DEFAULTS[scheme]
        params = dict(scheme=scheme, fft_size=n, cp_len=cp, subcarrier_spacing=df)
        params.update(overrides)
        return cls(**params)

    @property
    def sampling_rate(self) -> float:
        # Fast-OFDM sub-carriers sit on half-bin frequencies m/(2N), so the
        # sample clock runs at twice N * spacing.
        if self.scheme is Scheme.FAST_OFDM:
            return 2 * self.fft_size * self.subcarrier_spacing
        return self.fft_size * self.subcarrier_spacing

    @property
    def bits_per_frame(self) -> int:
        if self.scheme in (Scheme.STC_OFDM, Scheme.DUAL_STC):
            return 2 * self.fft_size
        return self.fft_size

    @property
    def frame_length(self) -> int:
        return self.fft_size + self.cp_len

    @property
    def useful_samples(self) -> int:
        """Samples per frame excluding cyclic prefixes."""
        return self.fft_size

    @property
    def frame_duration(self) -> float:
        return self.frame_length / self.sampling_rate


@dataclass(frozen=True)
class TimeFrame:
    """Baseband samples of one (or a batch of) transmitted frame(s)."""

    samples: np.ndarray
    scheme: Scheme
    pad_bits: int = 0
    compander_ref: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.samples.shape[-1]

    def with_samples(self, samples, **changes) -> "TimeFrame":
        return replace(self, samples=np.asarray(samples), **changes)


def _samples(frame) -> np.ndarray:
    return frame.samples if isinstance(frame, TimeFrame) else np.asarray(frame)


def _check_bits(bits, expected: int) -> np.ndarray:
    bits = np.asarray(bits)
    if bits.ndim == 0 or bits.shape[-1] != expected:
        got = bits.shape[-1] if bits.ndim else 0
        raise PayloadSizeError(f"expected {expected} bits per frame, got {got}")
    return bits


def add_cp(symbol, cp_len: int) -> np.ndarray:
    """Prepend the last ``cp_len`` samples."""
    symbol = np.asarray(symbol)
    n = symbol.shape[-1]
    if not 0 <= cp_len < n:
        raise ValueError(f"cp_len must satisfy 0 <= cp_len < {n}, got {cp_len}")
    if cp_len == 0:
        return symbol.copy()
    return np.concatenate([symbol[..., n - cp_len:], symbol], axis=-1)


def remove_cp(samples, cp_len: int) -> np.ndarray:
    return np.asarray(samples)[..., cp_len:]


# -- conventional OFDM ------------------------------------------------------


def ofdm_tx(bits, cfg: SchemeConfig) -> TimeFrame:
    bits = _check_bits(bits, cfg.fft_size)
    body = inverse_dft(stc_codec.polar_map(bits))
    return TimeFrame(add_cp(body, cfg.cp_len), Scheme.OFDM)


def ofdm_soft(frame, cfg: SchemeConfig) -> np.ndarray:
    return forward_dft(remove_cp(_samples(frame), cfg.cp_len)).real


def ofdm_rx(frame, cfg: SchemeConfig) -> np.ndarray:
    return stc_codec.hard_decision(ofdm_soft(frame, cfg))


# -- Fast-OFDM ----------------------------------------------------------------
#
# Sub-carrier n sits at (n - N/2) / (2N) cycles per sample, i.e. half the
# OFDM spacing, centred on DC. The extra half-sample phase makes the bank
# exactly orthogonal under real correlation, which is all BPSK needs.


def _fast_phases(m: int):
    k = np.arange(m)
    sample_rot = np.exp(-1j * np.pi * (2 * k + 1) / 4)
    carrier_rot = np.exp(1j * np.pi * k / (2 * m))
    return sample_rot, carrier_rot


def fast_ofdm_tx(bits, cfg: SchemeConfig, basis: str = "complex") -> TimeFrame:
    """Fast-OFDM transmitter.

    ``basis="complex"`` uses the half-spacing exponential bank (default);
    ``basis="dct"`` uses the real orthonormal DCT basis instead.
    """
    m = cfg.fft_size
    bits = _check_bits(bits, m)
    polar = stc_codec.polar_map(bits)
    if basis == "dct":
        body = inverse_orthonormal_dct(polar).astype(np.complex128)
    elif basis == "complex":
        sample_rot, carrier_rot = _fast_phases(m)
        padded = np.concatenate([polar * carrier_rot, np.zeros_like(polar)], axis=-1)
        body = 2 * np.sqrt(m) * sample_rot * inverse_dft(padded)[..., :m]
    else:
        raise ValueError(f"unknown Fast-OFDM basis {basis!r}")
    return TimeFrame(add_cp(body, cfg.cp_len), Scheme.FAST_OFDM)


def fast_ofdm_soft(frame, cfg: SchemeConfig, basis: str = "complex") -> np.ndarray:
    m = cfg.fft_size
    body = remove_cp(_samples(frame), cfg.cp_len)
    if basis == "dct":
        return orthonormal_dct(body.real)
    if basis != "complex":
        raise ValueError(f"unknown Fast-OFDM basis {basis!r}")
    sample_rot, carrier_rot = _fast_phases(m)
    padded = np.concatenate([body * np.conj(sample_rot), np.zeros_like(body)], axis=-1)
    corr = forward_dft(padded)[..., :m] * np.conj(carrier_rot) / np.sqrt(m)
    return corr.real


def fast_ofdm_rx(frame, cfg: SchemeConfig, basis: str = "complex") -> np.ndarray:
    return stc_codec.hard_decision(fast_ofdm_soft(frame, cfg, basis))


# -- STC-OFDM -----------------------------------------------------------------


def _stc_symbol(bits, cp_len: int) -> np.ndarray:
    return add_cp(inverse_dft(stc_codec.stc_encode(bits)), cp_len)


def _stc_despread(samples, cp_len: int) -> np.ndarray:
    return stc_codec.ste_soft(forward_dft(remove_cp(samples, cp_len)))


def stc_ofdm_tx(bits, cfg: SchemeConfig) -> TimeFrame:
    """``2N`` bits -> ``N`` STC symbols -> size-``N`` IDFT -> CP."""
    bits = _check_bits(bits, 2 * cfg.fft_size)
    return TimeFrame(_stc_symbol(bits, cfg.cp_len), Scheme.STC_OFDM)


def stc_ofdm_soft(frame, cfg: SchemeConfig) -> np.ndarray:
    return _stc_despread(_samples(frame), cfg.cp_len)


def stc_ofdm_rx(frame, cfg: SchemeConfig) -> np.ndarray:
    return stc_codec.hard_decision(stc_ofdm_soft(frame, cfg))


# -- dual STC (proposed) --------------------------------------------------------


def dual_stc_tx(bits_a, bits_b, cfg: SchemeConfig) -> TimeFrame:
    """Two sources, each one half-size STC symbol, concatenated in time."""
    bits_a = np.asarray(bits_a)
    bits_b = np.asarray(bits_b)
    if bits_a.shape != bits_b.shape:
        raise PayloadSizeError(f"source payloads differ: {bits_a.shape} vs {bits_b.shape}")
    cp_half = cfg.cp_len // 2
    _check_bits(bits_a, cfg.fft_size)
    y1 = _stc_symbol(bits_a, cp_half)
    y2 = _stc_symbol(bits_b, cp_half)
    return TimeFrame(np.concatenate([y1, y2], axis=-1), Scheme.DUAL_STC)


def dual_stc_soft(frame, cfg: SchemeConfig) -> tuple[np.ndarray, np.ndarray]:
    samples = _samples(frame)
    mid = samples.shape[-1] // 2
    cp_half = cfg.cp_len // 2
    return (
        _stc_despread(samples[..., :mid], cp_half),
        _stc_despread(samples[..., mid:], cp_half),
    )


def dual_stc_rx(frame, cfg: SchemeConfig) -> tuple[np.ndarray, np.ndarray]:
    soft_a, soft_b = dual_stc_soft(frame, cfg)
    return stc_codec.hard_decision(soft_a), stc_codec.hard_decision(soft_b)


# -- dispatch -------------------------------------------------------------------


def transmit(bits, cfg: SchemeConfig) -> TimeFrame:
    """Scheme-agnostic transmitter taking ``cfg.bits_per_frame`` bits.

    For dual-STC the first half of the payload is source A, the second half
    source B.
    """
    bits = _check_bits(bits, cfg.bits_per_frame)
    if cfg.scheme is Scheme.OFDM:
        return ofdm_tx(bits, cfg)
    if cfg.scheme is Scheme.FAST_OFDM:
        return fast_ofdm_tx(bits, cfg)
    if cfg.scheme is Scheme.STC_OFDM:
        return stc_ofdm_tx(bits, cfg)
    half = cfg.fft_size
    return dual_stc_tx(bits[..., :half], bits[..., half:], cfg)


def receive_soft(frame, cfg: SchemeConfig) -> np.ndarray:
    if cfg.scheme is Scheme.OFDM:
        return ofdm_soft(frame, cfg)
    if cfg.scheme is Scheme.FAST_OFDM:
        return fast_ofdm_soft(frame, cfg)
    if cfg.scheme is Scheme.STC_OFDM:
        return stc_ofdm_soft(frame, cfg)
    return np.concatenate(dual_stc_soft(frame, cfg), axis=-1)


def receive(frame, cfg: SchemeConfig) -> np.ndarray:
    """Inverse of :func:`transmit`; returns ``cfg.bits_per_frame`` bits."""
    return stc_codec.hard_decision(receive_soft(frame, cfg))


def body_samples(frame, cfg: SchemeConfig) -> np.ndarray:
    """Frame samples with every cyclic prefix stripped."""
    samples = _samples(frame)
    if cfg.scheme is not Scheme.DUAL_STC:
        return remove_cp(samples, cfg.cp_len)
    mid = samples.shape[-1] // 2
    cp_half = cfg.cp_len // 2
    return np.concatenate(
        [remove_cp(samples[..., :mid], cp_half), remove_cp(samples[..., mid:], cp_half)],
        axis=-1,
    )
