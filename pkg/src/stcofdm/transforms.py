"""Radix-2 discrete Fourier and cosine transforms.

All transforms act on the last axis, so a batch of symbols can be processed
in a single call. Lengths must be powers of two.

Scaling is fixed so that the pair round-trips exactly:

* ``inverse_dft`` carries the ``1/M`` factor,
* ``forward_dft`` is unscaled,
* ``orthonormal_dct`` / ``inverse_orthonormal_dct`` are both orthonormal.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


class TransformSizeError(ValueError):
    """Raised when a transform length is not a power of two >= 2."""


def is_power_of_two(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


def _check_length(m: int) -> None:
    if not is_power_of_two(m):
        raise TransformSizeError(f"transform length must be a power of two >= 2, got {m}")


@lru_cache(maxsize=None)
def _bit_reversal(m: int) -> np.ndarray:
    bits = m.bit_length() - 1
    idx = np.arange(m)
    rev = np.zeros(m, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=None)
def _twiddles(half: int, sign: int) -> np.ndarray:
    tw = np.exp(sign * 1j * np.pi * np.arange(half) / half)
    tw.setflags(write=False)
    return tw


def _radix2(x: np.ndarray, sign: int) -> np.ndarray:
    """Iterative decimation-in-time butterfly network, unscaled."""
    x = np.asarray(x, dtype=np.complex128)
    m = x.shape[-1]
    _check_length(m)
    lead = x.shape[:-1]
    y = x[..., _bit_reversal(m)]
    half = 1
    while half < m:
        y = y.reshape(*lead, m // (2 * half), 2, half)
        even = y[..., 0, :]
        odd = y[..., 1, :] * _twiddles(half, sign)
        y = np.concatenate([even + odd, even - odd], axis=-1)
        half *= 2
    return y.reshape(*lead, m)


def forward_dft(time) -> np.ndarray:
    """``Y[k] = sum_m time[m] exp(-j 2 pi k m / M)`` with no normalisation."""
    return _radix2(time, -1)


def inverse_dft(freq) -> np.ndarray:
    """``x[k] = (1/M) sum_m freq[m] exp(+j 2 pi k m / M)``."""
    freq = np.asarray(freq)
    return _radix2(freq, +1) / freq.shape[-1]


def _dct_scale(m: int) -> np.ndarray:
    s = np.full(m, np.sqrt(2.0 / m))
    s[0] = np.sqrt(1.0 / m)
    return s


def orthonormal_dct(x) -> np.ndarray:
    """Orthonormal DCT-II of real input (Makhoul's reordering + one complex DFT)."""
    x = np.asarray(x, dtype=np.float64)
    m = x.shape[-1]
    _check_length(m)
    v = np.concatenate([x[..., 0::2], x[..., 1::2][..., ::-1]], axis=-1)
    spec = forward_dft(v)
    k = np.arange(m)
    c = np.real(np.exp(-1j * np.pi * k / (2 * m)) * spec)
    return c * _dct_scale(m)


def inverse_orthonormal_dct(coeffs) -> np.ndarray:
    """Inverse of :func:`orthonormal_dct` (orthonormal DCT-III)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    m = coeffs.shape[-1]
    _check_length(m)
    c = coeffs / _dct_scale(m)
    # c_{M-k} for k = 1..M-1, with c_M taken as zero
    mirrored = np.concatenate([np.zeros_like(c[..., :1]), c[..., :0:-1]], axis=-1)
    k = np.arange(m)
    spec = np.exp(1j * np.pi * k / (2 * m)) * (c - 1j * mirrored)
    v = np.real(inverse_dft(spec))
    out = np.empty_like(v)
    half = m // 2
    out[..., 0::2] = v[..., :half]
    out[..., 1::2] = v[..., half:][..., ::-1]
    return out
