"""Signal extraction layer: request view, signal vector, and evaluators."""

from .base import RequestView, SignalKey, SignalOutcome, SignalVector
from .engine import SignalEngine

__all__ = [
    "RequestView",
    "SignalKey",
    "SignalOutcome",
    "SignalVector",
    "SignalEngine",
]
