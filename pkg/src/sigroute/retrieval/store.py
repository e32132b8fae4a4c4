"""In-memory vector store with hybrid (vector + BM25 + n-gram) search."""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import kernels
from ..embedding import Embedder, default_embedder
from ..textutil import ngram_jaccard
from .bm25 import Bm25Index
from .fusion import FusionConfig, fuse


@dataclass
class DocRecord:
    doc_id: str
    text: str
    embedding: np.ndarray
    metadata: dict = field(default_factory=dict)
    timestamp: float = field(default_factory=time.time)


@dataclass
class SearchResult:
    doc_id: str
    text: str
    score: float
    metadata: dict


class VectorStore:
    """Linear-scan cosine index with parallel BM25 index over the same docs.

    Searches run over an immutable snapshot; writes are serialized by a lock.
    """

    def __init__(self, embedder: Optional[Embedder] = None):
        self.embedder = embedder or default_embedder()
        self._lock = threading.Lock()
        self._records: dict[str, DocRecord] = {}
        self._bm25 = Bm25Index()
        self._matrix: Optional[np.ndarray] = None
        self._order: list[str] = []

    def __len__(self) -> int:
        return len(self._records)

    def add(self, doc_id: str, text: str, metadata: Optional[dict] = None,
            timestamp: Optional[float] = None) -> None:
        record = DocRecord(
            doc_id=doc_id,
            text=text,
            embedding=self.embedder.embed(text),
            metadata=metadata or {},
            timestamp=timestamp if timestamp is not None else time.time(),
        )
        with self._lock:
            self._records[doc_id] = record
            self._bm25.add(doc_id, text)
            self._matrix = None

    def remove(self, doc_id: str) -> None:
        with self._lock:
            if doc_id in self._records:
                del self._records[doc_id]
                self._bm25.remove(doc_id)
                self._matrix = None

    def get(self, doc_id: str) -> Optional[DocRecord]:
        return self._records.get(doc_id)

    def all_records(self) -> list[DocRecord]:
        return list(self._records.values())

    def _snapshot(self) -> tuple[np.ndarray, list[str]]:
        with self._lock:
            if self._matrix is None:
                self._order = list(self._records)
                if self._order:
                    self._matrix = np.stack(
                        [self._records[d].embedding for d in self._order]
                    )
                else:
                    self._matrix = np.empty((0, self.embedder.dim))
            return self._matrix, self._order

    def vector_search(
        self, query: str, top_k: int, threshold: Optional[float] = None
    ) -> list[tuple[str, float]]:
        """Top-k docs by cosine similarity, optionally filtered by threshold."""
        matrix, order = self._snapshot()
        if not order:
            return []
        scores = kernels.cosine_scores(matrix, self.embedder.embed(query))
        ranked = sorted(zip(order, scores.tolist()), key=lambda item: (-item[1], item[0]))
        if threshold is not None:
            ranked = [(d, s) for d, s in ranked if s >= threshold]
        return ranked[:top_k]

    def hybrid_search(
        self,
        query: str,
        config: FusionConfig,
        top_k: int = 5,
        threshold: Optional[float] = None,
    ) -> list[SearchResult]:
        """Fetch an expanded candidate set (4x top_k) by vector cosine, score
        candidates with BM25 and n-gram Jaccard, fuse, and return top_k.

        While fusion is active, score-based filtering is bypassed (fused
        scales differ from cosine) and volume is controlled solely by top_k.
        """
        candidates = self.vector_search(query, top_k * 4)
        if not candidates:
            return []
        vector_scores = dict(candidates)
        doc_ids = list(vector_scores)
        bm25_scores = self._bm25.scores(query, doc_ids)
        query_grams = kernels.ngram_id_set(query.lower())
        ngram_scores = {
            doc_id: kernels.ngram_jaccard_ids(
                query_grams, kernels.ngram_id_set(self._records[doc_id].text.lower())
            )
            for doc_id in doc_ids
        }
        fused = fuse(config, vector_scores, bm25_scores, ngram_scores, top_k)
        return [
            SearchResult(
                doc_id=doc_id,
                text=self._records[doc_id].text,
                score=score,
                metadata=self._records[doc_id].metadata,
            )
            for doc_id, score in fused
            if doc_id in self._records
        ]

    # -- optional persistence: one JSON record per line ---------------------

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for record in self._records.values():
                handle.write(
                    json.dumps(
                        {
                            "doc_id": record.doc_id,
                            "text": record.text,
                            "metadata": record.metadata,
                            "timestamp": record.timestamp,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str, embedder: Optional[Embedder] = None) -> "VectorStore":
        store = cls(embedder)
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                store.add(
                    data["doc_id"], data["text"], data.get("metadata"),
                    data.get("timestamp"),
                )
        return store
