"""Baseband simulation of OFDM, Fast-OFDM, STC-OFDM and dual-STC transceivers."""

__version__ = "0.1.0"

from .modem import Scheme, SchemeConfig, TimeFrame, receive, transmit  # noqa: E402

__all__ = ["Scheme", "SchemeConfig", "TimeFrame", "receive", "transmit", "__version__"]
