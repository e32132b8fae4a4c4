"""Okapi BM25 over an in-memory inverted index."""

from __future__ import annotations

import math
from collections import Counter

from ..textutil import tokenize

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


class Bm25Index:
    """Incremental single-node Okapi BM25 index.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); scores are always >= 0 and
    exactly 0 when no query term occurs in the document.
    """

    def __init__(self, k1: float = DEFAULT_K1, b: float = DEFAULT_B):
        self.k1 = k1
        self.b = b
        self.docs: dict[str, Counter] = {}
        self.doc_lens: dict[str, int] = {}
        self.df: Counter = Counter()
        self.total_len = 0

    def __len__(self) -> int:
        return len(self.docs)

    @property
    def avgdl(self) -> float:
        return self.total_len / len(self.docs) if self.docs else 0.0

    def add(self, doc_id: str, text: str) -> None:
        if doc_id in self.docs:
            self.remove(doc_id)
        tokens = tokenize(text)
        counts = Counter(tokens)
        self.docs[doc_id] = counts
        self.doc_lens[doc_id] = len(tokens)
        self.total_len += len(tokens)
        for term in counts:
            self.df[term] += 1

    def remove(self, doc_id: str) -> None:
        counts = self.docs.pop(doc_id, None)
        if counts is None:
            return
        self.total_len -= self.doc_lens.pop(doc_id)
        for term in counts:
            self.df[term] -= 1
            if self.df[term] <= 0:
                del self.df[term]

    def idf(self, term: str) -> float:
        n = len(self.docs)
        df = self.df.get(term, 0)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: list[str], doc_id: str) -> float:
        counts = self.docs.get(doc_id)
        if counts is None:
            raise KeyError(f"unknown document {doc_id!r}")
        length = self.doc_lens[doc_id]
        avgdl = self.avgdl
        norm = self.k1 * (1.0 - self.b + self.b * (length / avgdl)) if avgdl else self.k1
        total = 0.0
        for term in query_tokens:
            tf = counts.get(term, 0)
            if tf == 0:
                continue
            total += self.idf(term) * (tf * (self.k1 + 1.0)) / (tf + norm)
        return total

    def score_text(self, query: str, doc_id: str) -> float:
        return self.score(tokenize(query), doc_id)

    def scores(self, query: str, doc_ids: list[str]) -> dict[str, float]:
        tokens = tokenize(query)
        return {doc_id: self.score(tokens, doc_id) for doc_id in doc_ids}
