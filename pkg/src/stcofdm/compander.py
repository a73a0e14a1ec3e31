"""Peak-referenced mu-law companding of the complex envelope.

The magnitude ``r`` of each sample is mapped to
``V * ln(1 + mu r / V) / ln(1 + mu)`` with the phase untouched, where ``V`` is
the peak magnitude of the uncompanded frame. ``V`` is a fixed point, so the
peak stays put while small samples are lifted. ``mu = 0`` bypasses the
compander.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modem import TimeFrame


@dataclass(frozen=True)
class MuLawParams:
    mu: float
    reference: np.ndarray | float | None = None

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")


def _as_params(params) -> MuLawParams:
    return params if isinstance(params, MuLawParams) else MuLawParams(float(params))


def _apply_gain(samples: np.ndarray, r: np.ndarray, new_r: np.ndarray, limit) -> np.ndarray:
    # new_r / r tends to ``limit`` as r -> 0; scaling avoids dividing by tiny r
    gain = np.divide(new_r, r, out=np.broadcast_to(np.asarray(limit, dtype=float), r.shape).copy(),
                     where=r > 0)
    return samples * gain


def peak_reference(samples) -> np.ndarray:
    """Per-frame peak magnitude, shape ``(..., 1)``; all-zero frames get 1."""
    v = np.max(np.abs(samples), axis=-1, keepdims=True)
    return np.where(v > 0, v, 1.0)


def compress_samples(samples, mu: float, reference) -> np.ndarray:
    samples = np.asarray(samples, dtype=np.complex128)
    if mu == 0:
        return samples.copy()
    r = np.abs(samples)
    new_r = reference * np.log1p(mu * r / reference) / np.log1p(mu)
    return _apply_gain(samples, r, new_r, mu / np.log1p(mu))


def expand_samples(samples, mu: float, reference) -> np.ndarray:
    samples = np.asarray(samples, dtype=np.complex128)
    if mu == 0:
        return samples.copy()
    r = np.abs(samples)
    new_r = (reference / mu) * np.expm1(r * np.log1p(mu) / reference)
    return _apply_gain(samples, r, new_r, np.log1p(mu) / mu)


def mu_compress(frame: TimeFrame, params) -> TimeFrame:
    """Compress ``frame``; the reference used is stored on the result."""
    params = _as_params(params)
    if params.mu == 0:
        return frame
    if frame.samples.shape[-1] == 0:
        raise ValueError("cannot compand an empty frame")
    ref = params.reference
    if ref is None:
        ref = peak_reference(frame.samples)
    out = compress_samples(frame.samples, params.mu, ref)
    return frame.with_samples(out, compander_ref=ref)


def mu_expand(frame: TimeFrame, params) -> TimeFrame:
    """Expand ``frame`` using the reference carried on it (or in ``params``)."""
    params = _as_params(params)
    if params.mu == 0:
        return frame
    ref = params.reference if params.reference is not None else frame.compander_ref
    if ref is None:
        raise ValueError("mu-law expansion needs the compression reference V")
    return frame.with_samples(expand_samples(frame.samples, params.mu, ref))
