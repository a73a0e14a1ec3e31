"""Symbol time compression: Walsh spreading/combining and its de-spreading.

Two polar bits ``(p1, p2)`` are spread by the length-2 Walsh codes
``c0 = [+1, +1]`` and ``c1 = [+1, -1]``, summed chip-wise, halved, and the two
chips are loaded as the real and imaginary part of one sub-carrier symbol::

    bits (1, 1) -> +1      bits (1, 0) -> +j
    bits (0, 1) -> -j      bits (0, 0) -> -1

The receiver correlates the (Re, Im) chip pair with each code again.
Everything works on the last axis so batches of frames go through in one call.
"""
from __future__ import annotations

import numpy as np

WALSH_C0 = np.array([1.0, 1.0])
WALSH_C1 = np.array([1.0, -1.0])
WALSH = np.stack([WALSH_C0, WALSH_C1])  # hadamard(2)

STC_CONSTELLATION = np.array([1.0, 1j, -1j, -1.0])


class PayloadSizeError(ValueError):
    """Raised when a payload does not fit the frame or code structure."""


def polar_map(bits) -> np.ndarray:
    """Map 0 -> -1 and 1 -> +1."""
    return 2.0 * np.asarray(bits, dtype=np.float64) - 1.0


def spread_combine(bits) -> np.ndarray:
    """Combined chip pairs ``(p1 + p2, p1 - p2) / 2`` with shape ``(..., n/2, 2)``."""
    bits = np.asarray(bits)
    if bits.shape[-1] % 2:
        raise PayloadSizeError(f"STC needs an even number of bits, got {bits.shape[-1]}")
    polar = polar_map(bits).reshape(*bits.shape[:-1], -1, 2)
    # row i of polar @ WALSH is p1*c0 + p2*c1
    return polar @ WALSH / 2.0


def stc_encode(bits) -> np.ndarray:
    """Encode ``n`` bits into ``n/2`` complex sub-carrier symbols."""
    chips = spread_combine(bits)
    return chips[..., 0] + 1j * chips[..., 1]


def ste_soft(symbols) -> np.ndarray:
    """De-spread to soft values, interleaved as ``(v1, v2)`` per symbol.

    ``v1 = Re + Im`` is the correlation with ``c0`` and ``v2 = Re - Im`` with
    ``c1``. Output length is twice the symbol count.
    """
    symbols = np.asarray(symbols)
    chips = np.stack([symbols.real, symbols.imag], axis=-1)
    soft = chips @ WALSH.T
    return soft.reshape(*symbols.shape[:-1], -1)


def hard_decision(soft) -> np.ndarray:
    """Bit 1 where ``(v + 1) / 2 > 0.5``, i.e. ``v > 0``. Ties go to bit 0.

    The sign test is applied directly so that tiny soft values are not lost
    to rounding in the shift.
    """
    return (np.asarray(soft) > 0).astype(np.uint8)


def ste_decode(symbols) -> np.ndarray:
    return hard_decision(ste_soft(symbols))
