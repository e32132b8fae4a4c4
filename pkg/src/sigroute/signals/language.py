"""Statistical language detection via character-trigram frequency profiles.

Each shipped language has a profile vector built from the bundled snippets;
detection returns the profile with the highest trigram-frequency cosine
similarity, and that similarity as the confidence. Texts under 20 characters
return ("und", 0.0).
"""

from __future__ import annotations

import threading

import numpy as np

from .. import kernels
from ..config import LanguageParams

MIN_TEXT_CHARS = 20


class _ProfileIndex:
    """Shared trigram vocabulary plus one unit-norm row per language."""

    def __init__(self, snippets: dict[str, str]):
        self._snippets = dict(snippets)
        self._lock = threading.Lock()
        self._build()

    def _build(self) -> None:
        self.codes = list(self._snippets)
        per_lang = []
        for code in self.codes:
            ids = kernels.ngram_ids_raw(kernels.char_codes(self._snippets[code].lower()))
            uniq, counts = np.unique(ids, return_counts=True)
            per_lang.append((uniq, counts.astype(np.float64)))
        self.vocab = np.unique(np.concatenate([u for u, _ in per_lang]))
        matrix = np.zeros((len(self.codes), self.vocab.shape[0]), dtype=np.float64)
        for row, (uniq, counts) in enumerate(per_lang):
            positions = np.searchsorted(self.vocab, uniq)
            matrix[row, positions] = counts
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        self.matrix = matrix / norms

    def register(self, code: str, snippet: str) -> None:
        with self._lock:
            self._snippets[code] = snippet
            self._build()

    def detect(self, text: str) -> tuple[str, float]:
        if len(text) < MIN_TEXT_CHARS:
            return "und", 0.0
        ids = kernels.ngram_ids_raw(kernels.char_codes(text.lower()))
        uniq, counts = np.unique(ids, return_counts=True)
        if uniq.shape[0] == 0:
            return "und", 0.0
        counts = counts.astype(np.float64)
        full_norm = np.linalg.norm(counts)
        positions = np.searchsorted(self.vocab, uniq)
        positions = np.clip(positions, 0, self.vocab.shape[0] - 1)
        known = self.vocab[positions] == uniq
        vec = np.zeros(self.vocab.shape[0], dtype=np.float64)
        vec[positions[known]] = counts[known]
        sims = self.matrix @ (vec / full_norm)
        best = int(np.argmax(sims))
        return self.codes[best], float(np.clip(sims[best], 0.0, 1.0))


def _default_index() -> _ProfileIndex:
    from .language_data import PROFILE_SNIPPETS

    return _ProfileIndex(PROFILE_SNIPPETS)


_INDEX: _ProfileIndex | None = None


def _index() -> _ProfileIndex:
    global _INDEX
    if _INDEX is None:
        _INDEX = _default_index()
    return _INDEX


def detect_language(text: str) -> tuple[str, float]:
    """Best-matching language code and its cosine similarity as confidence."""
    return _index().detect(text)


def register_profile(code: str, snippet: str) -> None:
    """Add or replace a language profile at runtime."""
    _index().register(code, snippet)


def supported_languages() -> list[str]:
    return list(_index().codes)


def language_match(params: LanguageParams, text: str) -> tuple[bool, float, dict]:
    code, confidence = detect_language(text)
    matched = code in params.languages
    detail = {"language": code}
    return matched, confidence if matched else 0.0, detail
