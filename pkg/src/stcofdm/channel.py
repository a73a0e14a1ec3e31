"""Complex AWGN channel calibrated in Eb/N0."""
from __future__ import annotations

import math

import numpy as np

from .modem import TimeFrame


def noise_sigma(ebn0_db: float, frame_power: float, bits: int, useful_samples: int) -> float:
    """Total complex-noise standard deviation per sample for a given Eb/N0.

    ``Eb = frame_power * useful_samples / bits`` and ``sigma**2 = N0``, so each
    real dimension gets ``N0 / 2``. ``frame_power`` is the mean ``|x|**2`` of
    the transmitted samples.
    """
    if frame_power <= 0 or bits <= 0 or useful_samples <= 0:
        raise ValueError("frame_power, bits and useful_samples must all be positive")
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    eb = frame_power * useful_samples / bits
    n0 = eb / 10.0 ** (ebn0_db / 10.0)
    return math.sqrt(n0)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_noise(shape, sigma: float, seed) -> np.ndarray:
    rng = make_rng(seed)
    scale = sigma / math.sqrt(2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def awgn(frame, sigma: float, seed=None):
    """Add circular complex Gaussian noise of variance ``sigma**2`` per sample.

    Accepts a :class:`TimeFrame` or a bare sample array and returns the same
    kind. ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    samples = frame.samples if isinstance(frame, TimeFrame) else np.asarray(frame)
    if sigma == 0:
        noisy = samples.astype(np.complex128, copy=True)
    else:
        noisy = samples + complex_noise(samples.shape, sigma, seed)
    if isinstance(frame, TimeFrame):
        return frame.with_samples(noisy)
    return noisy
