"""Score fusion for hybrid retrieval: weighted combination and RRF."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_WEIGHTS = (0.7, 0.2, 0.1)  # (vector, bm25, ngram)
DEFAULT_RRF_K = 60
WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass
class FusionConfig:
    mode: str = "weighted"  # weighted | rrf
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS
    rrf_k: int = DEFAULT_RRF_K

    def __post_init__(self):
        if self.mode not in ("weighted", "rrf"):
            raise ValueError(f"unknown fusion mode {self.mode!r}")
        if self.rrf_k <= 0:
            raise ValueError("rrf k must be positive")
        if any(w < 0 for w in self.weights):
            raise ValueError("fusion weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"fusion weights must sum to 1, got {sum(self.weights)}")


def minmax_normalize(scores: dict[str, float]) -> dict[str, float]:
    """Min-max to [0, 1]; a constant vector normalizes to all 0.5."""
    if not scores:
        return {}
    low, high = min(scores.values()), max(scores.values())
    if high == low:
        return {k: 0.5 for k in scores}
    span = high - low
    return {k: (v - low) / span for k, v in scores.items()}


def fuse_weighted(
    vector_scores: dict[str, float],
    bm25_scores: dict[str, float],
    ngram_scores: dict[str, float],
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
    top_k: int | None = None,
) -> list[tuple[str, float]]:
    """w_v * vec + w_b * minmax(bm25) + w_n * ngram over the candidate union.

    Vector and n-gram scores are already in [0, 1]; BM25 is min-max
    normalized over the candidate set. Missing scores count as 0. Ties break
    by doc id.
    """
    w_v, w_b, w_n = weights
    bm25_norm = minmax_normalize(bm25_scores)
    candidates = set(vector_scores) | set(bm25_scores) | set(ngram_scores)
    fused = {
        doc: w_v * vector_scores.get(doc, 0.0)
        + w_b * bm25_norm.get(doc, 0.0)
        + w_n * ngram_scores.get(doc, 0.0)
        for doc in candidates
    }
    ranked = sorted(fused.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_k] if top_k is not None else ranked


def rrf_score(rank: int, k: int = DEFAULT_RRF_K) -> float:
    """Reciprocal-rank contribution for a 1-based rank."""
    return 1.0 / (k + rank)


def fuse_rrf(
    rankings: list[list[str]],
    k: int = DEFAULT_RRF_K,
    top_k: int | None = None,
) -> list[tuple[str, float]]:
    """score(d) = sum over lists of 1/(k + rank_r(d)); docs absent from a list
    contribute nothing for it. Ties break by doc id."""
    scores: dict[str, float] = {}
    for ranking in rankings:
        for position, doc in enumerate(ranking, start=1):
            scores[doc] = scores.get(doc, 0.0) + rrf_score(position, k)
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_k] if top_k is not None else ranked


def fuse(
    config: FusionConfig,
    vector_scores: dict[str, float],
    bm25_scores: dict[str, float],
    ngram_scores: dict[str, float],
    top_k: int | None = None,
) -> list[tuple[str, float]]:
    """Dispatch on fusion mode. RRF derives per-retriever rank lists from the
    given scores (descending, doc-id tiebreak)."""
    if config.mode == "weighted":
        return fuse_weighted(
            vector_scores, bm25_scores, ngram_scores, config.weights, top_k
        )

    def ranking(scores: dict[str, float]) -> list[str]:
        return [d for d, _ in sorted(scores.items(), key=lambda item: (-item[1], item[0]))]

    rankings = [ranking(s) for s in (vector_scores, bm25_scores, ngram_scores) if s]
    return fuse_rrf(rankings, config.rrf_k, top_k)
