"""Episodic memory: write path (entropy gate, Q:/A: chunks, window chunks),
read path (retrieval gate, hybrid search, ReflectionGate), and background
consolidation."""

from __future__ import annotations

import itertools
import re
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from ..embedding import Embedder, default_embedder
from ..textutil import tokenize, word_jaccard
from .fusion import FusionConfig
from .store import SearchResult, VectorStore

MAX_CHUNK_BYTES = 16_384
WINDOW_STRIDE = 3  # window chunk every s stored turns
WINDOW_SPAN = 5  # spanning the last w turns

GREETING_PHRASES = frozenset(
    {
        "hi", "hello", "hey", "yo", "sup", "hiya", "howdy",
        "good morning", "good afternoon", "good evening", "good night",
        "thanks", "thank you", "thx", "ty", "cheers",
        "ok", "okay", "sure", "yes", "no", "yep", "nope",
        "bye", "goodbye", "see you", "later",
    }
)

INJECTION_BLOCKLIST = [
    re.compile(p, re.IGNORECASE)
    for p in (
        r"ignore\s+(all\s+)?previous\s+instructions",
        r"disregard\s+(all\s+)?(your|prior)\s+instructions",
        r"you\s+are\s+now\s+dan",
        r"system\s*prompt\s*:",
        r"<\|im_start\|>",
        r"\bBEGIN\s+SYSTEM\b",
    )
]

RECENCY_HALF_LIFE_SECONDS = 7 * 24 * 3600.0
DEDUP_JACCARD = 0.8
CLUSTER_JACCARD = 0.6
DEFAULT_BUDGET = 5


def entropy_gate(user_text: str) -> bool:
    """True when the turn carries retrievable signal: at least 4 whitespace
    tokens and not a bare greeting/acknowledgment."""
    stripped = user_text.strip().lower().rstrip("!.?,")
    if stripped in GREETING_PHRASES:
        return False
    return len(user_text.split()) >= 4


def retrieval_gate(query: str, has_tools: bool = False) -> bool:
    """Skip memory retrieval for greetings, tool-augmented requests, and
    general fact-check style queries where personal context is irrelevant."""
    if has_tools:
        return False
    stripped = query.strip().lower().rstrip("!.?,")
    if stripped in GREETING_PHRASES or len(query.split()) < 2:
        return False
    from ..signals.stubs import classify_fact_check

    personal = {"i", "me", "my", "we", "our", "you"}
    if classify_fact_check(query) == "needs_fact_check" and not (
        personal & set(tokenize(query))
    ):
        return False
    return True


def _truncate_utf8(text: str, limit: int = MAX_CHUNK_BYTES) -> str:
    encoded = text.encode("utf-8", errors="replace")
    if len(encoded) <= limit:
        return encoded.decode("utf-8", errors="replace")
    return encoded[:limit].decode("utf-8", errors="ignore")


@dataclass
class MemoryCandidate:
    doc_id: str
    text: str
    score: float
    timestamp: float
    metadata: dict = field(default_factory=dict)


def reflection_gate(
    candidates: list[MemoryCandidate],
    now: Optional[float] = None,
    budget: int = DEFAULT_BUDGET,
    half_life: float = RECENCY_HALF_LIFE_SECONDS,
    dedup_threshold: float = DEDUP_JACCARD,
) -> list[MemoryCandidate]:
    """Post-retrieval filter: injection blocklist, recency decay, word-level
    Jaccard dedup (highest-scored representative survives), budget cap."""
    now = time.time() if now is None else now
    survivors = [
        c for c in candidates
        if not any(p.search(c.text) for p in INJECTION_BLOCKLIST)
    ]
    for candidate in survivors:
        age = max(0.0, now - candidate.timestamp)
        candidate.score *= 0.5 ** (age / half_life)
    survivors.sort(key=lambda c: (-c.score, c.doc_id))
    deduped: list[MemoryCandidate] = []
    for candidate in survivors:
        if any(word_jaccard(candidate.text, kept.text) >= dedup_threshold for kept in deduped):
            continue
        deduped.append(candidate)
    return deduped[:budget]


class MemoryStore:
    """Per-user episodic memory over per-user vector stores.

    Writes are serialized per user; searches run over immutable snapshots;
    consolidation swaps the user's store atomically.
    """

    def __init__(
        self,
        embedder: Optional[Embedder] = None,
        stride: int = WINDOW_STRIDE,
        span: int = WINDOW_SPAN,
    ):
        self.embedder = embedder or default_embedder()
        self.stride = stride
        self.span = span
        self._lock = threading.Lock()
        self._stores: dict[str, VectorStore] = {}
        self._turns: dict[str, list[str]] = {}  # stored turn texts per user
        self._seq: dict[str, int] = {}

    def _store_for(self, user: str) -> VectorStore:
        with self._lock:
            if user not in self._stores:
                self._stores[user] = VectorStore(self.embedder)
                self._turns[user] = []
                self._seq[user] = 0
            return self._stores[user]

    def write(self, user: str, user_text: str, assistant_text: str,
              timestamp: Optional[float] = None) -> list[str]:
        """Store one conversation turn; returns the ids of chunks written.

        Turns failing the entropy gate are discarded. Every `stride`-th stored
        turn additionally emits a window chunk over the last min(span, stored)
        turns.
        """
        if not entropy_gate(user_text):
            return []
        store = self._store_for(user)
        with self._lock:
            self._seq[user] += 1
            seq = self._seq[user]
            chunk = _truncate_utf8(f"Q: {user_text}\nA: {assistant_text}")
            self._turns[user].append(chunk)
            written = []
            turn_id = f"{user}:turn:{seq}"
            store.add(turn_id, chunk, {"user": user, "kind": "turn"}, timestamp)
            written.append(turn_id)
            if seq % self.stride == 0:
                window = self._turns[user][-self.span :]
                window_id = f"{user}:window:{seq}"
                store.add(
                    window_id,
                    _truncate_utf8("\n".join(window)),
                    {"user": user, "kind": "window"},
                    timestamp,
                )
                written.append(window_id)
            return written

    def search(
        self,
        user: str,
        query: str,
        fusion: Optional[FusionConfig] = None,
        top_k: int = DEFAULT_BUDGET,
        now: Optional[float] = None,
        apply_reflection: bool = True,
    ) -> list[SearchResult]:
        store = self._stores.get(user)
        if store is None or len(store) == 0:
            return []
        results = store.hybrid_search(query, fusion or FusionConfig(), top_k)
        if not apply_reflection:
            return results
        candidates = [
            MemoryCandidate(
                doc_id=r.doc_id,
                text=r.text,
                score=r.score,
                timestamp=store.get(r.doc_id).timestamp,
                metadata=r.metadata,
            )
            for r in results
        ]
        gated = reflection_gate(candidates, now=now, budget=top_k)
        return [
            SearchResult(doc_id=c.doc_id, text=c.text, score=c.score, metadata=c.metadata)
            for c in gated
        ]

    def consolidate(self, user: str) -> int:
        """Merge clusters linked by word-Jaccard >= 0.6 (greedy single
        linkage); each multi-member cluster collapses to its longest member,
        re-embedded. Returns the number of removed chunks. Idempotent."""
        store = self._stores.get(user)
        if store is None:
            return 0
        with self._lock:
            records = store.all_records()
            n = len(records)
            if n < 2:
                return 0
            parent = list(range(n))

            def find(i: int) -> int:
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for i, j in itertools.combinations(range(n), 2):
                if word_jaccard(records[i].text, records[j].text) >= CLUSTER_JACCARD:
                    parent[find(i)] = find(j)

            clusters: dict[int, list[int]] = {}
            for i in range(n):
                clusters.setdefault(find(i), []).append(i)

            removed = 0
            replacement = VectorStore(self.embedder)
            for members in clusters.values():
                if len(members) == 1:
                    record = records[members[0]]
                    replacement.add(record.doc_id, record.text, record.metadata,
                                    record.timestamp)
                    continue
                keeper = max(members, key=lambda i: (len(records[i].text), records[i].doc_id))
                record = records[keeper]
                replacement.add(record.doc_id, record.text, record.metadata,
                                record.timestamp)
                removed += len(members) - 1
            self._stores[user] = replacement
            return removed
