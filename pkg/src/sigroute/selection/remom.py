"""Multi-round orchestration: breadth schedules of decreasing parallelism with
LLM-driven synthesis between rounds."""

from __future__ import annotations

import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..errors import SelectionError

CHARS_PER_TOKEN = 4
DEFAULT_TEMPERATURE = 1.0
DEFAULT_CONCURRENCY = 8

DEFAULT_SYNTHESIS_TEMPLATE = (
    "You previously asked several assistants the question below. Review the "
    "numbered reference answers and write your own complete solution to the "
    "original question.\n\nQuestion:\n{query}\n\nReference answers:\n{references}\n"
)


class TemplateRenderError(SelectionError):
    """Synthesis template failed to render; carries the offending field."""


def schedule(breadths: list[int]) -> list[int]:
    """Append the automatic final round: [b_1..b_R] -> [b_1..b_R, 1].

    Total upstream calls for the returned schedule = sum(breadths) + 1.
    An empty input yields the single final round [1].
    """
    if any(b < 1 for b in breadths):
        raise SelectionError("breadths must all be >= 1")
    return list(breadths) + [1]


def distribute(breadth: int, num_candidates: int, strategy: str = "equal") -> list[int]:
    """Per-candidate call counts for one round.

    equal: floor division with round-robin remainder allocation starting at
    candidate 0. weighted: currently equivalent to equal. first_only: all
    calls to candidate 0 (the runner assigns distinct seeds per call).
    """
    if breadth < 1:
        raise SelectionError("round breadth must be >= 1")
    if num_candidates < 1:
        raise SelectionError("distribution requires at least one candidate")
    if strategy == "first_only":
        return [breadth] + [0] * (num_candidates - 1)
    if strategy in ("equal", "weighted"):
        base, remainder = divmod(breadth, num_candidates)
        return [base + (1 if i < remainder else 0) for i in range(num_candidates)]
    raise SelectionError(f"unknown distribution strategy {strategy!r}")


def compact_response(text: str, mode: str = "full", tokens: int = 1000) -> str:
    """full: unchanged. last_n_tokens: keep the final 4*N characters (the
    whole response when shorter)."""
    if mode == "full":
        return text
    if mode == "last_n_tokens":
        budget = tokens * CHARS_PER_TOKEN
        return text if len(text) <= budget else text[-budget:]
    raise SelectionError(f"unknown compaction mode {mode!r}")


def synthesis_prompt(
    query: str,
    responses: list[str],
    template: Optional[str] = None,
    compaction: str = "full",
    compaction_tokens: int = 1000,
) -> str:
    """Render the synthesis prompt from the original query and the previous
    round's responses as numbered references."""
    if not responses:
        raise SelectionError("synthesis requires at least one prior response")
    template = template or DEFAULT_SYNTHESIS_TEMPLATE
    references = "\n".join(
        f"[{i}] {compact_response(r, compaction, compaction_tokens)}"
        for i, r in enumerate(responses, start=1)
    )
    try:
        fields = [f for _, f, _, _ in string.Formatter().parse(template) if f]
        unknown = [f for f in fields if f not in ("query", "references")]
        if unknown:
            raise TemplateRenderError(
                f"template references unknown field {unknown[0]!r}"
            )
        return template.format(query=query, references=references)
    except (KeyError, IndexError, ValueError) as exc:
        raise TemplateRenderError(f"template render failure: {exc}") from exc


# call function: (model, prompt, temperature, seed) -> response text
CallFn = Callable[[str, str, float, int], str]


@dataclass
class RoundTrace:
    round_index: int
    calls: list[tuple[str, int]]  # (model, seed) in call-index order
    responses: list[str]


@dataclass
class RemomResult:
    final: str
    total_calls: int
    rounds: list[RoundTrace] = field(default_factory=list)


class RemomRunner:
    """Executes a breadth schedule against candidate models.

    Calls within a round run concurrently (bounded); responses are collected
    in deterministic call-index order before synthesis. The temperature
    applies to every round, including synthesis rounds.
    """

    def __init__(
        self,
        call_fn: CallFn,
        candidates: list[str],
        breadths: list[int],
        strategy: str = "equal",
        temperature: float = DEFAULT_TEMPERATURE,
        concurrency: int = DEFAULT_CONCURRENCY,
        seed: int = 0,
        template: Optional[str] = None,
        compaction: str = "full",
        compaction_tokens: int = 1000,
    ):
        if not candidates:
            raise SelectionError("remom requires candidates")
        self.call_fn = call_fn
        self.candidates = candidates
        self.rounds = schedule(breadths)
        self.strategy = strategy
        self.temperature = temperature
        self.concurrency = max(1, concurrency)
        self.seed = seed
        self.template = template
        self.compaction = compaction
        self.compaction_tokens = compaction_tokens

    def run(self, query: str) -> RemomResult:
        traces: list[RoundTrace] = []
        prompt = query
        next_seed = self.seed
        for round_index, breadth in enumerate(self.rounds):
            counts = distribute(breadth, len(self.candidates), self.strategy)
            calls: list[tuple[str, int]] = []
            for model, count in zip(self.candidates, counts):
                for _ in range(count):
                    calls.append((model, next_seed))
                    next_seed += 1
            with ThreadPoolExecutor(max_workers=min(self.concurrency, len(calls))) as pool:
                responses = list(
                    pool.map(
                        lambda call: self.call_fn(call[0], prompt, self.temperature, call[1]),
                        calls,
                    )
                )
            traces.append(RoundTrace(round_index, calls, responses))
            if round_index < len(self.rounds) - 1:
                prompt = synthesis_prompt(
                    query, responses, self.template, self.compaction, self.compaction_tokens
                )
        total = sum(len(t.calls) for t in traces)
        return RemomResult(final=traces[-1].responses[0], total_calls=total, rounds=traces)
