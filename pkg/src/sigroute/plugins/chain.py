"""Per-decision plugin chain execution.

The request-path order is fixed: fast_response, cache, rag, modality, memory,
system_prompt, header_mutation. Each plugin is independently enabled by the
matched decision's config; a short-circuit stops the chain and guarantees
zero upstream calls for the request. Failures in optional stages are
annotated and skipped (fail-open); fast_response and the cache read are total
and cannot fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..config import Decision
from ..retrieval.fusion import FusionConfig
from ..retrieval.memory import MemoryStore, retrieval_gate
from ..retrieval.store import VectorStore
from ..signals.base import RequestView, SignalVector
from .cache import LookupOutcome, SemanticCache
from .mutations import header_mutate, system_prompt_apply

REQUEST_CHAIN_ORDER = (
    "fast_response",
    "cache",
    "rag",
    "modality",
    "memory",
    "system_prompt",
    "header_mutation",
)


@dataclass
class ShortCircuit:
    kind: str  # "fast_response" | "cache"
    message: Optional[str] = None  # fast_response payload
    response: Optional[Any] = None  # cached response body
    similarity: float = 0.0


@dataclass
class PluginServices:
    cache: Optional[SemanticCache] = None
    memory: Optional[MemoryStore] = None
    rag_stores: dict[str, VectorStore] = field(default_factory=dict)


@dataclass
class PluginContext:
    request: RequestView
    decision: Decision
    signals: SignalVector
    short_circuit: Optional[ShortCircuit] = None
    annotations: list[tuple[str, str]] = field(default_factory=list)
    cache_lookup: Optional[LookupOutcome] = None
    cache_query: Optional[str] = None
    model_override: Optional[list[str]] = None

    def annotate(self, key: str, value: str) -> None:
        self.annotations.append((key, value))

    def stages_run(self) -> list[str]:
        return [value for key, value in self.annotations if key == "stage"]


def _inject_context_message(request: RequestView, header: str, texts: list[str]) -> None:
    """Insert retrieved context as a separate message after any leading system
    instructions but before user turns."""
    if not texts:
        return
    content = header + "\n" + "\n".join(f"- {t}" for t in texts)
    index = 0
    while index < len(request.messages) and request.messages[index].get("role") == "system":
        index += 1
    request.messages.insert(index, {"role": "system", "content": content})


def _stage_fast_response(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.fast_response
    if cfg is None or not cfg.enabled:
        return
    ctx.annotate("stage", "fast_response")
    ctx.short_circuit = ShortCircuit(kind="fast_response", message=cfg.message)


def _stage_cache(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.cache
    if cfg is None or not cfg.enabled or services.cache is None:
        return
    ctx.annotate("stage", "cache")
    query = ctx.request.latest_user_text
    outcome = services.cache.lookup(query, cfg.threshold)
    ctx.cache_lookup = outcome
    ctx.cache_query = query
    if outcome.hit:
        ctx.annotate("cache", "hit")
        ctx.short_circuit = ShortCircuit(
            kind="cache", response=outcome.response, similarity=outcome.similarity
        )
        return
    if outcome.followed:
        response = outcome.wait(services.cache.pending_timeout)
        if response is not None:
            ctx.annotate("cache", "followed")
            ctx.short_circuit = ShortCircuit(kind="cache", response=response)
            return
        ctx.annotate("cache", "follow_timeout")
    else:
        ctx.annotate("cache", "miss")


def _stage_rag(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.rag
    if cfg is None or not cfg.enabled:
        return
    store = services.rag_stores.get(cfg.store)
    if store is None:
        ctx.annotate("plugin_error", f"rag: unknown store {cfg.store!r}")
        return
    ctx.annotate("stage", "rag")
    if cfg.fusion == "vector":
        hits = store.vector_search(ctx.request.latest_user_text, cfg.top_k)
        texts = [store.get(doc_id).text for doc_id, _ in hits]
    else:
        fusion = FusionConfig(mode=cfg.fusion)
        results = store.hybrid_search(ctx.request.latest_user_text, fusion, cfg.top_k)
        texts = [r.text for r in results]
    _inject_context_message(ctx.request, "Relevant reference material:", texts)


def _stage_modality(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.modality
    if cfg is None or not cfg.enabled:
        return
    ctx.annotate("stage", "modality")
    for override in cfg.overrides:
        if ctx.signals.matched(("modality", override.rule)):
            ctx.model_override = list(override.models)
            ctx.annotate("modality_override", override.rule)
            return


def _stage_memory(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.memory
    if cfg is None or not cfg.enabled or services.memory is None:
        return
    ctx.annotate("stage", "memory")
    query = ctx.request.latest_user_text
    if not retrieval_gate(query, has_tools=ctx.request.has_tools):
        ctx.annotate("memory", "gated")
        return
    user = ctx.request.headers.get(cfg.user_header.lower(), "anonymous")
    results = services.memory.search(user, query, top_k=cfg.top_k)
    _inject_context_message(
        ctx.request, "Context from earlier conversations:", [r.text for r in results]
    )


def _stage_system_prompt(ctx: PluginContext, services: PluginServices) -> None:
    cfg = ctx.decision.plugins.system_prompt
    if cfg is None:
        return
    ctx.annotate("stage", "system_prompt")
    ctx.request.messages = system_prompt_apply(ctx.request.messages, cfg.text, cfg.mode)


def _stage_header_mutation(ctx: PluginContext, services: PluginServices) -> None:
    mutations = ctx.decision.plugins.header_mutation
    if not mutations:
        return
    ctx.annotate("stage", "header_mutation")
    ctx.request.headers = header_mutate(ctx.request.headers, mutations)


_STAGES = {
    "fast_response": _stage_fast_response,
    "cache": _stage_cache,
    "rag": _stage_rag,
    "modality": _stage_modality,
    "memory": _stage_memory,
    "system_prompt": _stage_system_prompt,
    "header_mutation": _stage_header_mutation,
}

# Stages whose failure would be a bug in this engine, not a plugin fault;
# they run unwrapped so errors surface in tests.
_TOTAL_STAGES = {"fast_response", "cache"}


def run_request_chain(
    ctx: PluginContext,
    services: Optional[PluginServices] = None,
    stages: Optional[tuple[str, ...]] = None,
) -> PluginContext:
    """Execute the (sub)chain in fixed order; stops at a short-circuit."""
    services = services or PluginServices()
    for name in stages or REQUEST_CHAIN_ORDER:
        if ctx.short_circuit is not None:
            break
        stage = _STAGES[name]
        if name in _TOTAL_STAGES:
            stage(ctx, services)
            continue
        try:
            stage(ctx, services)
        except Exception as exc:  # fail-open
            ctx.annotate("plugin_error", f"{name}: {type(exc).__name__}: {exc}")
    return ctx


def complete_cache(ctx: PluginContext, services: PluginServices, response: Any) -> bool:
    """Response-path cache write for a request that held the pending entry."""
    if (
        services.cache is not None
        and ctx.cache_lookup is not None
        and ctx.cache_lookup.leader
        and ctx.cache_query is not None
    ):
        services.cache.complete(ctx.cache_query, response)
        return True
    return False


def abandon_cache(ctx: PluginContext, services: PluginServices) -> None:
    """Drop the pending entry after an upstream failure so retries re-forward."""
    if (
        services.cache is not None
        and ctx.cache_lookup is not None
        and ctx.cache_lookup.leader
        and ctx.cache_query is not None
    ):
        services.cache.abandon(ctx.cache_query)
