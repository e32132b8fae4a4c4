"""PII detection with an allow-list policy model.

The default detector finds EMAIL, PHONE, SSN, and CREDIT_CARD via built-in
patterns with fixed confidence 1.0 per hit. Pluggable detectors may return
graded confidences; the rule fires when any detected type not in the
allow-list reaches the rule threshold.
"""

from __future__ import annotations

import re
from typing import Callable

from ..config import PiiParams

PiiHit = tuple[str, float]  # (entity type, confidence)
PiiDetector = Callable[[str], list[PiiHit]]

_PATTERNS: list[tuple[str, re.Pattern]] = [
    ("EMAIL", re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")),
    ("SSN", re.compile(r"(?<!\d)\d{3}-\d{2}-\d{4}(?!\d)")),
    ("PHONE", re.compile(
        r"(?<!\d)(?:\+?\d{1,2}[-.\s])?(?:\(\d{3}\)\s?|\d{3}[-.\s])\d{3}[-.\s]\d{4}(?!\d)"
    )),
    ("CREDIT_CARD", re.compile(r"(?<!\d)(?:\d[ -]?){12,18}\d(?!\d)")),
]


def default_detector(text: str) -> list[PiiHit]:
    hits = []
    for entity_type, pattern in _PATTERNS:
        if entity_type == "CREDIT_CARD":
            # Require 13-19 digits total so phone-length runs do not qualify.
            for match in pattern.finditer(text):
                digits = sum(c.isdigit() for c in match.group())
                if 13 <= digits <= 19:
                    hits.append((entity_type, 1.0))
                    break
        elif pattern.search(text):
            hits.append((entity_type, 1.0))
    return hits


def pii_match(
    params: PiiParams, text: str, detector: PiiDetector = default_detector
) -> tuple[bool, float, dict]:
    """Evaluate a PII rule; detail carries the firing entity types."""
    allow = set(params.pii_types_allowed)
    firing = [
        (entity_type, conf)
        for entity_type, conf in detector(text)
        if entity_type not in allow and conf >= params.threshold
    ]
    if not firing:
        return False, 0.0, {"types": []}
    confidence = max(conf for _, conf in firing)
    types = sorted({entity_type for entity_type, _ in firing})
    return True, confidence, {"types": types}
