"""Request view and signal vector types: the interface between the neural
and symbolic layers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

SignalKey = tuple[str, str]  # (signal_type, rule_name)


@dataclass
class RequestView:
    """Normalized view of an inbound chat request.

    ``estimated_tokens`` uses the ceil(chars / 4) heuristic, applied uniformly
    for context-length matching and response compaction.
    """

    messages: list[dict]
    headers: dict[str, str] = field(default_factory=dict)
    model_hint: Optional[str] = None
    stream: bool = False
    has_tools: bool = False

    def __post_init__(self):
        self.headers = {k.lower(): v for k, v in self.headers.items()}

    @classmethod
    def from_chat_request(cls, body: dict, headers: Optional[dict] = None) -> "RequestView":
        messages = body.get("messages") or []
        return cls(
            messages=[dict(m) for m in messages],
            headers=dict(headers or {}),
            model_hint=body.get("model"),
            stream=bool(body.get("stream", False)),
            has_tools=bool(body.get("tools")),
        )

    @property
    def estimated_tokens(self) -> int:
        chars = sum(len(m.get("content") or "") for m in self.messages)
        return math.ceil(chars / 4)

    @property
    def latest_user_text(self) -> str:
        for message in reversed(self.messages):
            if message.get("role") == "user":
                return message.get("content") or ""
        return ""

    @property
    def user_texts(self) -> list[str]:
        return [
            m.get("content") or "" for m in self.messages if m.get("role") == "user"
        ]

    @property
    def system_text(self) -> str:
        for message in self.messages:
            if message.get("role") == "system":
                return message.get("content") or ""
        return ""


@dataclass(frozen=True)
class SignalOutcome:
    matched: bool
    confidence: float
    error: Optional[str] = None
    detail: Optional[dict] = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


class SignalVector:
    """Map from (signal_type, rule_name) to its evaluation outcome."""

    def __init__(self, entries: Optional[dict[SignalKey, SignalOutcome]] = None):
        self.entries: dict[SignalKey, SignalOutcome] = dict(entries or {})

    def set(self, key: SignalKey, outcome: SignalOutcome) -> None:
        self.entries[key] = outcome

    def get(self, key: SignalKey) -> Optional[SignalOutcome]:
        return self.entries.get(key)

    def matched(self, key: SignalKey) -> bool:
        outcome = self.entries.get(key)
        return outcome.matched if outcome else False

    def confidence(self, key: SignalKey) -> float:
        outcome = self.entries.get(key)
        return outcome.confidence if outcome else 0.0

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: SignalKey) -> bool:
        return key in self.entries

    def __eq__(self, other) -> bool:
        return isinstance(other, SignalVector) and self.entries == other.entries

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{t}({n})={'+' if o.matched else '-'}{o.confidence:.2f}"
            for (t, n), o in sorted(self.entries.items())
        )
        return f"SignalVector({parts})"

    def to_dict(self) -> dict:
        return {
            f"{t}:{n}": {
                "matched": o.matched,
                "confidence": round(o.confidence, 6),
                **({"error": o.error} if o.error else {}),
                **({"detail": o.detail} if o.detail else {}),
            }
            for (t, n), o in sorted(self.entries.items())
        }
