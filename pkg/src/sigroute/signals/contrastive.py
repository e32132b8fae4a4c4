"""Embedding-similarity and contrastive signal evaluation.

Reference/exemplar embeddings are precomputed at engine construction; at
request time the cost is one text embedding plus cosine scans.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..config import ComplexityParams, EmbeddingParams, JailbreakParams
from ..embedding import Embedder, embed_many


def _clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


def max_cosine(vec: np.ndarray, matrix: np.ndarray) -> float:
    scores = kernels.cosine_scores(matrix, vec)
    return float(scores.max()) if scores.size else 0.0


def embedding_similarity_match(
    params: EmbeddingParams, vec: np.ndarray, refs: np.ndarray
) -> tuple[bool, float]:
    """Matched iff the max cosine against any reference meets the threshold;
    confidence is that max, clamped to [0, 1]."""
    best = max_cosine(vec, refs)
    matched = best >= params.threshold
    return matched, _clamp01(best) if matched else 0.0


def contrastive_score(vec: np.ndarray, hard: np.ndarray, easy: np.ndarray) -> float:
    """max cosine against the hard set minus max cosine against the easy set.

    Antisymmetric under swapping the sets; 0 when they are identical.
    """
    return max_cosine(vec, hard) - max_cosine(vec, easy)


def complexity_level(delta: float, threshold: float) -> str:
    if delta > threshold:
        return "hard"
    if delta < -threshold:
        return "easy"
    return "medium"


def complexity_match(
    params: ComplexityParams, vec: np.ndarray, hard: np.ndarray, easy: np.ndarray
) -> tuple[bool, float, dict]:
    """Fires when the computed difficulty level equals the rule's target level.

    Confidence grades the contrastive margin: |delta| toward the matched pole,
    1 - |delta| for a medium match.
    """
    delta = contrastive_score(vec, hard, easy)
    level = complexity_level(delta, params.threshold)
    matched = level == params.level
    if not matched:
        return False, 0.0, {"level": level, "delta": delta}
    if level == "hard":
        confidence = _clamp01(delta)
    elif level == "easy":
        confidence = _clamp01(-delta)
    else:
        confidence = 1.0 - _clamp01(abs(delta))
    return True, confidence, {"level": level, "delta": delta}


def jailbreak_contrastive_match(
    params: JailbreakParams,
    user_texts: list[str],
    embedder: Embedder,
    jb_matrix: np.ndarray,
    benign_matrix: np.ndarray,
) -> tuple[bool, float, dict]:
    """Max-pooled contrastive score across turns.

    With include_history every user message is scored and the maximum taken,
    so one escalation turn anywhere in the conversation fires the rule.
    """
    texts = user_texts if params.include_history else user_texts[-1:]
    if not texts:
        return False, 0.0, {}
    best = -2.0
    best_index = 0
    for index, text in enumerate(texts):
        delta = contrastive_score(embedder.embed(text), jb_matrix, benign_matrix)
        if delta > best:
            best = delta
            best_index = index
    matched = best >= params.threshold
    detail = {"delta": best, "turn": best_index}
    return matched, _clamp01(best) if matched else 0.0, detail


def precompute(embedder: Embedder, texts: list[str]) -> np.ndarray:
    return embed_many(embedder, texts)
