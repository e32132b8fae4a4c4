"""Write-through semantic cache.

Lookups scan complete entries by cosine similarity against a per-decision
threshold. A miss registers a pending entry keyed by the normalized query
text before the request is forwarded, so concurrent identical queries wait
for the one in-flight upstream call instead of forwarding again. Complete
entries are bounded by LRU eviction.
"""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .. import kernels
from ..embedding import Embedder, default_embedder

DEFAULT_CAPACITY = 4096
PENDING_WAIT_TIMEOUT = 30.0


@dataclass
class CacheEntry:
    query: str
    embedding: np.ndarray
    state: str  # "pending" | "complete"
    response: Optional[Any] = None
    created_at: float = field(default_factory=time.time)
    hit_count: int = 0


class _Pending:
    def __init__(self):
        self.event = threading.Event()
        self.response: Optional[Any] = None


@dataclass
class LookupOutcome:
    hit: bool
    response: Optional[Any] = None
    similarity: float = 0.0
    leader: bool = False
    _pending: Optional[_Pending] = None

    @property
    def followed(self) -> bool:
        return not self.hit and not self.leader

    def wait(self, timeout: float = PENDING_WAIT_TIMEOUT) -> Optional[Any]:
        """Block until the leading request completes the entry; None after the
        timeout or an abandoned entry, in which case the caller forwards
        independently."""
        if self._pending is None:
            return None
        if not self._pending.event.wait(timeout):
            return None
        return self._pending.response


def _normalize(query: str) -> str:
    return query.strip()


class SemanticCache:
    """In-memory linear-scan cosine index with pending-entry write-through.

    Lookups are concurrent; pending registration and completion are
    serialized per query key by the store lock.
    """

    def __init__(
        self,
        embedder: Optional[Embedder] = None,
        capacity: int = DEFAULT_CAPACITY,
        pending_timeout: float = PENDING_WAIT_TIMEOUT,
    ):
        self.embedder = embedder or default_embedder()
        self.capacity = capacity
        self.pending_timeout = pending_timeout
        self._lock = threading.Lock()
        self._complete: OrderedDict[str, CacheEntry] = OrderedDict()
        self._pending: dict[str, _Pending] = {}
        self._matrix: Optional[np.ndarray] = None
        self._matrix_keys: list[str] = []

    def __len__(self) -> int:
        return len(self._complete)

    def _rebuild_matrix_locked(self) -> None:
        self._matrix_keys = list(self._complete)
        if self._matrix_keys:
            self._matrix = np.stack(
                [self._complete[k].embedding for k in self._matrix_keys]
            )
        else:
            self._matrix = np.empty((0, self.embedder.dim))

    def lookup(self, query: str, threshold: float) -> LookupOutcome:
        """Hit: the most similar complete entry with cos >= threshold.
        Miss: registers (or joins) a pending entry for this query."""
        key = _normalize(query)
        vec = self.embedder.embed(key)
        with self._lock:
            if self._matrix is None:
                self._rebuild_matrix_locked()
            if self._matrix.shape[0]:
                scores = kernels.cosine_scores(self._matrix, vec)
                best = int(np.argmax(scores))
                similarity = float(scores[best])
                if similarity >= threshold:
                    entry = self._complete[self._matrix_keys[best]]
                    entry.hit_count += 1
                    self._complete.move_to_end(self._matrix_keys[best])
                    return LookupOutcome(hit=True, response=entry.response,
                                         similarity=similarity)
            pending = self._pending.get(key)
            if pending is not None:
                return LookupOutcome(hit=False, leader=False, _pending=pending)
            pending = _Pending()
            self._pending[key] = pending
            return LookupOutcome(hit=False, leader=True, _pending=pending)

    def complete(self, query: str, response: Any) -> None:
        """Transition pending -> complete and release waiters. Completing a
        query with no pending entry upserts it directly (idempotent)."""
        key = _normalize(query)
        with self._lock:
            pending = self._pending.pop(key, None)
            entry = CacheEntry(
                query=key,
                embedding=self.embedder.embed(key),
                state="complete",
                response=response,
            )
            self._complete[key] = entry
            self._complete.move_to_end(key)
            while len(self._complete) > self.capacity:
                self._complete.popitem(last=False)  # least-recently-hit first
            self._matrix = None
        if pending is not None:
            pending.response = response
            pending.event.set()

    def abandon(self, query: str) -> None:
        """Remove the pending entry after an upstream failure so retries
        re-forward; waiters are released empty-handed and forward
        independently."""
        key = _normalize(query)
        with self._lock:
            pending = self._pending.pop(key, None)
        if pending is not None:
            pending.event.set()

    def entries(self) -> list[CacheEntry]:
        return list(self._complete.values())
