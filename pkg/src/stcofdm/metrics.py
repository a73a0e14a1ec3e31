"""Measurement: PAPR and CCDF, BER with confidence intervals, PSD, complexity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import signal, special

from .modem import TimeFrame
from .transforms import is_power_of_two

Z95 = 1.959963984540054


# -- PAPR -----------------------------------------------------------------------


def _oversample(samples: np.ndarray, factor: int) -> np.ndarray:
    """Band-limited interpolation by zero-padding the middle of the spectrum."""
    n = samples.shape[-1]
    spec = np.fft.fft(samples, axis=-1)
    padded = np.zeros(samples.shape[:-1] + (n * factor,), dtype=np.complex128)
    lo = (n + 1) // 2
    padded[..., :lo] = spec[..., :lo]
    padded[..., n * factor - (n - lo):] = spec[..., lo:]
    return np.fft.ifft(padded, axis=-1) * factor


def papr_db(frame, oversample: int = 1):
    """``10 log10(max|y|^2 / mean|y|^2)`` over the last axis (CP included).

    Returns a float for a single frame, an array for a batch.
    """
    samples = frame.samples if isinstance(frame, TimeFrame) else np.asarray(frame)
    if samples.ndim == 0 or samples.shape[-1] == 0:
        raise ValueError("PAPR of an empty frame is undefined")
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    if oversample > 1:
        samples = _oversample(samples, oversample)
    power = np.abs(samples) ** 2
    out = 10 * np.log10(power.max(axis=-1) / power.mean(axis=-1))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PaprSample:
    value_db: float
    scheme: str
    symbol_index: int


def ccdf(papr_samples, step: float = 0.1, thresholds=None) -> tuple[np.ndarray, np.ndarray]:
    """Empirical ``Pr(PAPR > threshold)`` on a ``step``-dB grid.

    The default grid runs from one step below the smallest sample to one step
    above the largest, aligned to multiples of ``step``.
    """
    values = np.sort(np.asarray(papr_samples, dtype=np.float64).ravel())
    if values.size == 0:
        raise ValueError("no PAPR samples")
    if thresholds is None:
        lo = math.floor(values[0] / step) - 1
        hi = math.ceil(values[-1] / step) + 1
        thresholds = np.arange(lo, hi + 1) * step
    thresholds = np.asarray(thresholds, dtype=np.float64)
    exceed = values.size - np.searchsorted(values, thresholds, side="right")
    return thresholds, exceed / values.size


def ccdf_crossing(papr_samples, probability: float = 1e-3) -> float:
    """Threshold at which the empirical CCDF falls to ``probability``."""
    values = np.asarray(papr_samples, dtype=np.float64).ravel()
    return float(np.quantile(values, 1.0 - probability))


# -- BER ------------------------------------------------------------------------


class BerResult(NamedTuple):
    errors: int
    total: int
    ber: float
    ci_low: float
    ci_high: float


def wilson_interval(errors: int, total: int, z: float = Z95) -> tuple[float, float]:
    if total <= 0:
        return 0.0, 1.0
    p = errors / total
    denom = 1 + z * z / total
    centre = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def ber_count(sent, received) -> BerResult:
    sent = np.asarray(sent)
    received = np.asarray(received)
    if sent.shape != received.shape:
        raise ValueError(f"length mismatch: {sent.shape} vs {received.shape}")
    errors = int(np.count_nonzero(sent != received))
    total = int(sent.size)
    lo, hi = wilson_interval(errors, total)
    return BerResult(errors, total, errors / total if total else 0.0, lo, hi)


def theoretical_ber_bpsk(ebn0_db) -> float | np.ndarray:
    """``Q(sqrt(2 Eb/N0))`` for coherent BPSK over AWGN."""
    ebn0 = 10.0 ** (np.asarray(ebn0_db, dtype=np.float64) / 10.0)
    out = 0.5 * special.erfc(np.sqrt(ebn0))
    return float(out) if np.ndim(out) == 0 else out


def binomial_sigma(p: float, total: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / total)


def matches_theory(errors: int, total: int, p_ref: float, k: float = 3.0) -> bool:
    """Measured BER within ``k`` binomial sigmas of the reference probability."""
    return abs(errors / total - p_ref) <= k * binomial_sigma(p_ref, total)


def same_ber(errors_a: int, total_a: int, errors_b: int, total_b: int, k: float = 3.0) -> bool:
    """Two BER measurements agree within ``k`` sigmas (pooled binomial)."""
    pooled = (errors_a + errors_b) / (total_a + total_b)
    sigma = math.sqrt(pooled * (1 - pooled) * (1 / total_a + 1 / total_b))
    return abs(errors_a / total_a - errors_b / total_b) <= k * sigma


def snr_at_ber(ebn0_db, ber, target: float) -> float:
    """Eb/N0 where a measured BER curve crosses ``target``.

    Linear interpolation of ``log10(BER)``; points with zero errors are
    ignored. Returns ``nan`` if the curve never reaches the target.
    """
    x = np.asarray(ebn0_db, dtype=np.float64)
    y = np.asarray(ber, dtype=np.float64)
    keep = y > 0
    x, y = x[keep], np.log10(y[keep])
    t = math.log10(target)
    for i in range(len(x) - 1):
        if y[i] >= t >= y[i + 1] and y[i] != y[i + 1]:
            return float(x[i] + (t - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
    return float("nan")


# -- spectrum ---------------------------------------------------------------------


@dataclass(frozen=True)
class PsdEstimate:
    freqs: np.ndarray  # Hz, ascending, centred on DC
    density: np.ndarray  # power per Hz
    resolution_bw: float  # equivalent noise bandwidth of the window, Hz

    @property
    def power_db(self) -> np.ndarray:
        return 10 * np.log10(np.maximum(self.density, np.finfo(float).tiny))

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def total_power(self) -> float:
        return float(self.density.sum() * self.bin_width)


def psd_welch(samples, fs: float, segment_len: int = 1024, overlap: float = 0.5,
              window: str = "hann") -> PsdEstimate:
    """Averaged, windowed periodogram of a complex stream (two-sided)."""
    x = np.asarray(samples).ravel()
    if not is_power_of_two(segment_len):
        raise ValueError(f"segment_len must be a power of two, got {segment_len}")
    if x.size < segment_len:
        raise ValueError(f"need at least {segment_len} samples, got {x.size}")
    win = signal.get_window(window, segment_len)
    freqs, dens = signal.welch(
        x, fs=fs, window=win, nperseg=segment_len, noverlap=int(segment_len * overlap),
        detrend=False, return_onesided=False, scaling="density",
    )
    freqs = np.fft.fftshift(freqs)
    dens = np.fft.fftshift(dens)
    enbw = fs * np.sum(win**2) / np.sum(win) ** 2
    return PsdEstimate(freqs, dens, float(enbw))


def occupied_bandwidth(psd: PsdEstimate, fraction: float = 0.99, center: float | None = None) -> float:
    """Width of the smallest band centred on ``center`` holding ``fraction`` of the power.

    ``center`` defaults to the power-weighted mean frequency. The band edges
    are taken at whole bins, so the result is a multiple of the bin width.
    """
    if not 0 < fraction < 1:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    dens = psd.density
    if center is None:
        center = float(np.sum(psd.freqs * dens) / np.sum(dens))
    dist = np.abs(psd.freqs - center)
    order = np.argsort(dist, kind="stable")
    cum = np.cumsum(dens[order])
    idx = int(np.searchsorted(cum, fraction * cum[-1]))
    # include every bin at the same distance as the one that crossed
    reach = dist[order[min(idx, len(order) - 1)]]
    n_bins = int(np.count_nonzero(dist <= reach + 1e-9 * psd.bin_width))
    return n_bins * psd.bin_width


# -- complexity -------------------------------------------------------------------

COMPLEXITY_ROWS = ("ofdm", "fast", "stc", "dual", "dual_mulaw")
COMPLEXITY_LABELS = {
    "ofdm": "Conventional OFDM",
    "fast": "Fast OFDM",
    "stc": "STC-OFDM",
    "dual": "Proposed scheme",
    "dual_mulaw": "Proposed scheme with mu-law",
}


@dataclass(frozen=True)
class ComplexityReport:
    scheme: str
    n: int
    multiplications: int
    additions: int


def complexity_counts(scheme: str, n: int) -> ComplexityReport:
    """Closed-form multiply/add counts for an ``n``-point transceiver."""
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    key = str(getattr(scheme, "value", scheme)).lower()
    lg = n.bit_length() - 1
    if key in ("ofdm", "fast", "dual"):
        mult, add = 2 * n * lg - 2 * n, 3 * n * lg - n
    elif key == "stc":
        mult = n * (lg - 1) - n
        add = 3 * n * (lg - 1) // 2 - n // 2
    elif key == "dual_mulaw":
        mult, add = 2 * n * lg - n, 3 * n * lg + 3 * n
    else:
        raise ValueError(f"unknown complexity row {scheme!r}")
    return ComplexityReport(key, n, mult, add)
