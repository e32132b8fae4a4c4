"""Unified Select interface: dispatch by algorithm id.

``confidence`` is the cascading escalate-on-low-confidence strategy and maps
to the AutoMix cascade machinery; ``remom`` is an execution strategy whose
result carries the breadth schedule for the caller to drive.
"""

from __future__ import annotations

from typing import Callable

from ..errors import SelectionError
from . import algorithms
from .algorithms import SelectionContext, SelectionResult
from .remom import schedule

Selector = Callable[[SelectionContext, dict], SelectionResult]


def _select_remom(ctx: SelectionContext, params: dict) -> SelectionResult:
    breadths = [int(b) for b in params.get("breadth_schedule", [])]
    return SelectionResult(
        ctx.names[0],
        1.0,
        meta={
            "remom": True,
            "schedule": schedule(breadths),
            "strategy": params.get("model_distribution", "equal"),
        },
    )


_SELECTORS: dict[str, Selector] = {
    "static": algorithms.select_static,
    "elo": algorithms.select_elo,
    "routerdc": algorithms.select_routerdc,
    "hybrid": algorithms.select_hybrid,
    "automix": algorithms.select_automix,
    "confidence": algorithms.select_automix,
    "knn": algorithms.select_knn,
    "kmeans": algorithms.select_kmeans,
    "mlp": algorithms.select_mlp,
    "thompson": algorithms.select_thompson,
    "latency_aware": algorithms.select_latency_aware,
    "remom": _select_remom,
}


def is_registered(algorithm_id: str) -> bool:
    return algorithm_id in _SELECTORS


def registered_ids() -> list[str]:
    return sorted(_SELECTORS)


def register(algorithm_id: str, selector: Selector) -> None:
    """Register a custom selector (extension point)."""
    _SELECTORS[algorithm_id] = selector


def select(algorithm_id: str, ctx: SelectionContext, params: dict | None = None) -> SelectionResult:
    """Dispatch to the named algorithm, returning the selected model and a
    confidence in [0, 1]."""
    selector = _SELECTORS.get(algorithm_id)
    if selector is None:
        raise SelectionError(
            f"unknown selection algorithm {algorithm_id!r} "
            f"(registered: {', '.join(registered_ids())})"
        )
    return selector(ctx, params or {})
