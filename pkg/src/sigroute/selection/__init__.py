"""Model selection: the unified Select interface and its algorithms."""

from .algorithms import (
    SelectionContext,
    SelectionResult,
    automix_expected_cost,
    mock_verifier,
    run_cascade,
)
from .registry import register, registered_ids, select
from .remom import RemomRunner, compact_response, distribute, schedule, synthesis_prompt
from .state import BetaState, EloState, LatencyStore, elo_win_probability

__all__ = [
    "BetaState",
    "EloState",
    "LatencyStore",
    "RemomRunner",
    "SelectionContext",
    "SelectionResult",
    "automix_expected_cost",
    "compact_response",
    "distribute",
    "elo_win_probability",
    "mock_verifier",
    "register",
    "registered_ids",
    "run_cascade",
    "schedule",
    "select",
    "synthesis_prompt",
]
