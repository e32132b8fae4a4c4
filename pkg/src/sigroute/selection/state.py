"""Mutable feedback state consumed by the selection algorithms: Elo ratings,
Beta posteriors, and rolling latency windows. Updates are serialized by an
internal lock; reads take consistent snapshots."""

from __future__ import annotations

import math
import threading
from collections import deque
from typing import Iterable

INITIAL_RATING = 1500.0
DEFAULT_K_FACTOR = 32.0
DEFAULT_WINDOW = 1024

METRIC_TPOT = "tpot"
METRIC_TTFT = "ttft"


def elo_win_probability(rating_i: float, rating_j: float) -> float:
    """Bradley-Terry win probability P(i beats j) = 1/(1 + 10^((Rj-Ri)/400))."""
    return 1.0 / (1.0 + 10.0 ** ((rating_j - rating_i) / 400.0))


class EloState:
    """Per-model Elo ratings with standard K-factor updates from pairwise
    feedback. Zero-sum: a pairwise update conserves the rating sum."""

    def __init__(self, k_factor: float = DEFAULT_K_FACTOR,
                 initial: float = INITIAL_RATING):
        self.k_factor = k_factor
        self.initial = initial
        self._lock = threading.Lock()
        self._ratings: dict[str, float] = {}

    def rating(self, model: str) -> float:
        return self._ratings.get(model, self.initial)

    def ratings(self, models: Iterable[str]) -> dict[str, float]:
        with self._lock:
            return {m: self._ratings.get(m, self.initial) for m in models}

    def update_pair(self, winner: str, loser: str, outcome: float = 1.0) -> None:
        """Apply feedback for one comparison; outcome is the winner's score
        (1 win, 0.5 draw)."""
        if not math.isfinite(outcome):
            raise ValueError("outcome must be finite")
        with self._lock:
            r_w = self._ratings.get(winner, self.initial)
            r_l = self._ratings.get(loser, self.initial)
            expected = elo_win_probability(r_w, r_l)
            delta = self.k_factor * (outcome - expected)
            self._ratings[winner] = r_w + delta
            self._ratings[loser] = r_l - delta

    def pool_win_rate(self, model: str, pool: list[str]) -> float:
        """Mean win probability of `model` against the other pool members;
        1.0 for a singleton pool."""
        others = [m for m in pool if m != model]
        if not others:
            return 1.0
        r = self.rating(model)
        return sum(elo_win_probability(r, self.rating(o)) for o in others) / len(others)


class BetaState:
    """Per-model Beta(alpha, beta) posteriors over success probability,
    initialized at (1, 1) and updated by unit counts."""

    def __init__(self):
        self._lock = threading.Lock()
        self._params: dict[str, tuple[float, float]] = {}

    def get(self, model: str) -> tuple[float, float]:
        return self._params.get(model, (1.0, 1.0))

    def set(self, model: str, alpha: float, beta: float) -> None:
        if alpha < 1.0 or beta < 1.0:
            raise ValueError("Beta parameters must be >= 1")
        with self._lock:
            self._params[model] = (float(alpha), float(beta))

    def update(self, model: str, success: bool) -> None:
        with self._lock:
            alpha, beta = self._params.get(model, (1.0, 1.0))
            if success:
                alpha += 1.0
            else:
                beta += 1.0
            self._params[model] = (alpha, beta)

    def mean(self, model: str) -> float:
        alpha, beta = self.get(model)
        return alpha / (alpha + beta)


class LatencyStore:
    """Bounded rolling windows of latency observations per (model, metric).

    Percentiles use the nearest-rank definition on the sorted window; the
    percentile of a singleton window is that value.
    """

    def __init__(self, window: int = DEFAULT_WINDOW):
        self.window = window
        self._lock = threading.Lock()
        self._observations: dict[tuple[str, str], deque] = {}

    def record(self, model: str, metric: str, value: float) -> None:
        if value < 0:
            raise ValueError("latency observations must be non-negative")
        key = (model, metric)
        with self._lock:
            if key not in self._observations:
                self._observations[key] = deque(maxlen=self.window)
            self._observations[key].append(float(value))

    def count(self, model: str, metric: str) -> int:
        return len(self._observations.get((model, metric), ()))

    def percentile(self, model: str, metric: str, p: float) -> float:
        """Nearest-rank percentile, p in (0, 100]."""
        if not 0 < p <= 100:
            raise ValueError("percentile must be in (0, 100]")
        window = self._observations.get((model, metric))
        if not window:
            raise KeyError(f"no observations for {model}/{metric}")
        with self._lock:
            ordered = sorted(window)
        rank = max(1, math.ceil(p / 100.0 * len(ordered)))
        return ordered[rank - 1]
