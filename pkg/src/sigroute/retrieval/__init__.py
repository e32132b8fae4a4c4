"""Hybrid lexical+vector retrieval and episodic memory."""

from .bm25 import Bm25Index
from .fusion import FusionConfig, fuse, fuse_rrf, fuse_weighted, minmax_normalize
from .memory import MemoryStore, entropy_gate, reflection_gate, retrieval_gate
from .store import SearchResult, VectorStore

__all__ = [
    "Bm25Index",
    "FusionConfig",
    "MemoryStore",
    "SearchResult",
    "VectorStore",
    "entropy_gate",
    "fuse",
    "fuse_rrf",
    "fuse_weighted",
    "minmax_normalize",
    "reflection_gate",
    "retrieval_gate",
]
