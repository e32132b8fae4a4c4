"""Embedding interface and the default hashed-trigram embedder.

The default embedder is a deterministic, dependency-free stand-in for a
neural embedding model: an L2-normalized hashed character-trigram frequency
vector. It preserves lexical-similarity structure, which is what the
contrastive and cache-similarity formulas need. Production deployments
register a real model behind the same interface.
"""

from typing import Callable, Protocol

import numpy as np

from . import kernels

DEFAULT_DIM = 256


class Embedder(Protocol):
    """Maps text to a unit-norm vector of fixed dimension."""

    dim: int

    def embed(self, text: str) -> np.ndarray: ...


class HashedTrigramEmbedder:
    """L2-normalized hashed character-trigram frequency vector.

    Deterministic for a fixed input; lowercases and pads so every input
    (including the empty string) yields at least one trigram and therefore
    a true unit vector.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        norm_text = text.lower()
        if len(norm_text) < 3:
            norm_text = norm_text + " " * (3 - len(norm_text))
        counts = kernels.hashed_ngram_counts(kernels.char_codes(norm_text), self.dim)
        return counts / np.linalg.norm(counts)


class FnEmbedder:
    """Adapts a plain ``text -> vector`` callable to the Embedder interface."""

    def __init__(self, fn: Callable[[str], np.ndarray], dim: int):
        self.dim = dim
        self._fn = fn

    def embed(self, text: str) -> np.ndarray:
        return self._fn(text)


def default_embedder() -> HashedTrigramEmbedder:
    return HashedTrigramEmbedder()


def embed_many(embedder: Embedder, texts: list[str]) -> np.ndarray:
    """Stack embeddings into a (len(texts), dim) matrix."""
    if not texts:
        return np.empty((0, embedder.dim), dtype=np.float64)
    return np.stack([embedder.embed(t) for t in texts])
