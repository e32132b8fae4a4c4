"""Gated hallucination-check control flow: sentinel gate, span detector, NLI
explainer, and the configured response action.

The stage internals are pluggable predicates; the defaults are a table-driven
sentinel stub and always-empty detector/explainer mocks, so only the control
flow and cost model live here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..signals.stubs import classify_fact_check

# sentinel: query -> needs fact check?
SentinelFn = Callable[[str], bool]
# detector: (query, context, response) -> [(start, end, confidence)]
DetectorFn = Callable[[str, str, str], list[tuple[int, int, float]]]
# explainer: (span_text, context) -> "entailment" | "contradiction" | "neutral"
ExplainerFn = Callable[[str, str], str]


def default_sentinel(query: str) -> bool:
    return classify_fact_check(query) == "needs_fact_check"


def empty_detector(query: str, context: str, response: str) -> list[tuple[int, int, float]]:
    return []


def neutral_explainer(span_text: str, context: str) -> str:
    return "neutral"


@dataclass
class HalugateStages:
    sentinel: SentinelFn = default_sentinel
    detector: DetectorFn = empty_detector
    explainer: ExplainerFn = neutral_explainer


@dataclass
class HalugateOutcome:
    response_text: str
    gated: bool  # sentinel demanded verification
    spans: list[dict] = field(default_factory=list)
    blocked: bool = False
    header_value: Optional[str] = None
    annotations: list[str] = field(default_factory=list)

    @property
    def detected(self) -> bool:
        return bool(self.spans)


BLOCK_MESSAGE = "Response rejected: unsupported factual claims were detected."


def halugate_run(
    query: str,
    context: str,
    response_text: str,
    stages: Optional[HalugateStages] = None,
    action: str = "none",
) -> HalugateOutcome:
    """Run the gated pipeline over an upstream response.

    A no-fact-check sentinel verdict skips the detector and explainer
    entirely. Stage hook failures are treated as no-detection and annotated.
    """
    if action not in ("block", "header", "body", "none"):
        raise ValueError(f"unknown halugate action {action!r}")
    stages = stages or HalugateStages()
    outcome = HalugateOutcome(response_text=response_text, gated=False)

    try:
        outcome.gated = stages.sentinel(query)
    except Exception as exc:
        outcome.annotations.append(f"sentinel_error:{type(exc).__name__}")
        return outcome
    if not outcome.gated:
        return outcome

    try:
        raw_spans = stages.detector(query, context, response_text)
    except Exception as exc:
        outcome.annotations.append(f"detector_error:{type(exc).__name__}")
        return outcome

    for start, end, confidence in raw_spans:
        span_text = response_text[start:end]
        try:
            label = stages.explainer(span_text, context)
        except Exception as exc:
            outcome.annotations.append(f"explainer_error:{type(exc).__name__}")
            label = "neutral"
        outcome.spans.append(
            {"start": start, "end": end, "confidence": confidence,
             "text": span_text, "label": label}
        )

    if not outcome.spans:
        return outcome

    if action == "block":
        outcome.blocked = True
        outcome.response_text = BLOCK_MESSAGE
    elif action == "header":
        outcome.header_value = json.dumps(
            {"spans": len(outcome.spans),
             "labels": sorted({s["label"] for s in outcome.spans})},
            separators=(",", ":"),
        )
    elif action == "body":
        outcome.response_text = (
            "[warning: some statements below could not be verified]\n" + response_text
        )
    return outcome


def halugate_expected_cost(
    c_sentinel: float, p_factual: float, c_detector: float,
    mean_spans: float, c_nli: float,
) -> float:
    """Expected per-query cost of the gated pipeline:
    C_sent + p_factual * (C_det + mean_spans * C_nli)."""
    if min(c_sentinel, c_detector, mean_spans, c_nli) < 0:
        raise ValueError("stage costs must be non-negative")
    if not 0.0 <= p_factual <= 1.0:
        raise ValueError("p_factual must be in [0, 1]")
    return c_sentinel + p_factual * (c_detector + mean_spans * c_nli)
