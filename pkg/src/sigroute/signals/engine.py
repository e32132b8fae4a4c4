"""Signal engine: demand-driven, order-independent evaluation of signal rules.

Evaluators are pure functions of (request, rule, precomputed state); the
engine runs the demanded set concurrently or sequentially with identical
results. A failing evaluator yields matched=False / confidence=0 with an
error annotation and never aborts the request.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

from ..config import RouterConfig, SignalRuleDef, SignalType, used_signal_types
from ..embedding import Embedder, default_embedder
from . import contrastive, keyword, language, pii, stubs
from .base import RequestView, SignalKey, SignalOutcome, SignalVector

# evaluator: (engine, rule, request) -> SignalOutcome
Evaluator = Callable[["SignalEngine", SignalRuleDef, RequestView], SignalOutcome]

_MAX_WORKERS = 8


def _outcome(matched: bool, confidence: float, detail: Optional[dict] = None) -> SignalOutcome:
    return SignalOutcome(matched=matched, confidence=confidence, detail=detail or None)


def _eval_keyword(engine, rule, request) -> SignalOutcome:
    compiled = engine.compiled_patterns.get(rule.key)
    matched, conf = keyword.keyword_match(rule.params, request.latest_user_text, compiled)
    return _outcome(matched, conf)


def _eval_context(engine, rule, request) -> SignalOutcome:
    params = rule.params
    tokens = request.estimated_tokens
    upper_ok = params.max_tokens is None or tokens <= params.max_tokens
    matched = params.min_tokens <= tokens and upper_ok
    return _outcome(matched, 1.0 if matched else 0.0, {"tokens": tokens})


def _eval_language(engine, rule, request) -> SignalOutcome:
    matched, conf, detail = language.language_match(rule.params, request.latest_user_text)
    return _outcome(matched, conf, detail)


def _eval_authz(engine, rule, request) -> SignalOutcome:
    params = rule.params
    raw = request.headers.get(params.header.lower(), "")
    roles = {part.strip() for part in raw.split(",") if part.strip()}
    matched = bool(roles & set(params.roles))
    return _outcome(matched, 1.0 if matched else 0.0, {"roles": sorted(roles)} if roles else None)


def _eval_embedding(engine, rule, request) -> SignalOutcome:
    refs = engine.reference_matrices[rule.key]
    vec = engine.embedder.embed(request.latest_user_text)
    matched, conf = contrastive.embedding_similarity_match(rule.params, vec, refs)
    return _outcome(matched, conf)


def _eval_complexity(engine, rule, request) -> SignalOutcome:
    hard, easy = engine.exemplar_matrices[rule.key]
    vec = engine.embedder.embed(request.latest_user_text)
    matched, conf, detail = contrastive.complexity_match(rule.params, vec, hard, easy)
    return _outcome(matched, conf, detail)


def _eval_jailbreak(engine, rule, request) -> SignalOutcome:
    params = rule.params
    if params.method == "contrastive":
        jb, benign = engine.exemplar_matrices[rule.key]
        matched, conf, detail = contrastive.jailbreak_contrastive_match(
            params, request.user_texts, engine.embedder, jb, benign
        )
    else:
        matched, conf, detail = stubs.jailbreak_classifier_match(
            params, request.user_texts, engine.jailbreak_classifier
        )
    return _outcome(matched, conf, detail)


def _eval_pii(engine, rule, request) -> SignalOutcome:
    matched, conf, detail = pii.pii_match(
        rule.params, request.latest_user_text, engine.pii_detector
    )
    return _outcome(matched, conf, detail)


def _eval_stub(engine, rule, request) -> SignalOutcome:
    matched, conf, detail = stubs.stub_match(
        rule.type.value, rule.name, rule.params, request.latest_user_text
    )
    return _outcome(matched, conf, detail)


_BUILTIN_EVALUATORS: dict[str, Evaluator] = {
    SignalType.KEYWORD.value: _eval_keyword,
    SignalType.CONTEXT.value: _eval_context,
    SignalType.LANGUAGE.value: _eval_language,
    SignalType.AUTHZ.value: _eval_authz,
    SignalType.EMBEDDING.value: _eval_embedding,
    SignalType.COMPLEXITY.value: _eval_complexity,
    SignalType.JAILBREAK.value: _eval_jailbreak,
    SignalType.PII.value: _eval_pii,
    SignalType.DOMAIN.value: _eval_stub,
    SignalType.FACT_CHECK.value: _eval_stub,
    SignalType.FEEDBACK.value: _eval_stub,
    SignalType.MODALITY.value: _eval_stub,
    SignalType.PREFERENCE.value: _eval_stub,
}


class SignalEngine:
    """Evaluates signal rules for one loaded config.

    Reference and exemplar embeddings plus compiled regexes are computed once
    at construction and shared read-only across requests; invocation counters
    are the only mutable state (guarded by a lock).
    """

    def __init__(self, config: RouterConfig, embedder: Optional[Embedder] = None):
        self.config = config
        self.embedder = embedder or default_embedder()
        self.pii_detector = pii.default_detector
        self.jailbreak_classifier = stubs.jailbreak_classifier_stub
        self._evaluators = dict(_BUILTIN_EVALUATORS)
        self._counter_lock = threading.Lock()
        self.invocations: dict[SignalKey, int] = {}

        self.compiled_patterns: dict[SignalKey, list] = {}
        self.reference_matrices: dict[SignalKey, object] = {}
        self.exemplar_matrices: dict[SignalKey, tuple] = {}
        for rule in config.signals:
            if rule.type is SignalType.KEYWORD and rule.params.method == "regex":
                self.compiled_patterns[rule.key] = keyword.compile_patterns(rule.params)
            elif rule.type is SignalType.EMBEDDING:
                self.reference_matrices[rule.key] = contrastive.precompute(
                    self.embedder, rule.params.candidates
                )
            elif rule.type is SignalType.COMPLEXITY:
                self.exemplar_matrices[rule.key] = (
                    contrastive.precompute(self.embedder, rule.params.hard),
                    contrastive.precompute(self.embedder, rule.params.easy),
                )
            elif rule.type is SignalType.JAILBREAK and rule.params.method == "contrastive":
                self.exemplar_matrices[rule.key] = (
                    contrastive.precompute(self.embedder, rule.params.jailbreak_patterns),
                    contrastive.precompute(self.embedder, rule.params.benign_patterns),
                )

    def register_evaluator(self, signal_type: str, evaluator: Evaluator) -> None:
        """Replace the evaluator for a signal type (extension point)."""
        self._evaluators[signal_type] = evaluator

    def _evaluate_rule(self, rule: SignalRuleDef, request: RequestView) -> SignalOutcome:
        with self._counter_lock:
            self.invocations[rule.key] = self.invocations.get(rule.key, 0) + 1
        evaluator = self._evaluators[rule.type.value]
        try:
            return evaluator(self, rule, request)
        except Exception as exc:  # fail-closed, never abort the request
            return SignalOutcome(matched=False, confidence=0.0, error=f"{type(exc).__name__}: {exc}")

    def evaluate(
        self,
        request: RequestView,
        demanded: Optional[set[SignalKey]] = None,
        parallel: bool = True,
    ) -> SignalVector:
        """One outcome per demanded rule; rules not demanded are never invoked
        and are absent from the result. Evaluation order does not affect the
        result."""
        if demanded is None:
            demanded = used_signal_types(self.config)
        rules = [r for r in self.config.signals if r.key in demanded]
        vector = SignalVector()
        if not rules:
            return vector
        if parallel and len(rules) > 1:
            with ThreadPoolExecutor(max_workers=min(_MAX_WORKERS, len(rules))) as pool:
                outcomes = list(pool.map(lambda r: self._evaluate_rule(r, request), rules))
            for rule, outcome in zip(rules, outcomes):
                vector.set(rule.key, outcome)
        else:
            for rule in rules:
                vector.set(rule.key, self._evaluate_rule(rule, request))
        return vector
