"""Numeric hot kernels: character n-gram extraction, hashing, and cosine scans.

Every text-derived feature in the router (embeddings, n-gram Jaccard,
language profiles) bottoms out in these functions, so they carry numba
``@njit`` implementations with a pure-numpy fallback. Set ``SR_PURE_NUMPY=1``
to force the fallback; it is also used automatically when numba is not
installed. ``benchmarks/bench_kernels.py`` compares the two paths.
"""

import os

import numpy as np

_PURE_NUMPY = os.environ.get("SR_PURE_NUMPY", "") not in ("", "0")

try:
    if _PURE_NUMPY:
        raise ImportError("pure-numpy path forced via SR_PURE_NUMPY")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

# Codepoints are < 2^21, so three of them pack losslessly into an int64.
_SHIFT = 21
_HASH_P1 = 31 * 31
_HASH_P2 = 31


def char_codes(text: str) -> np.ndarray:
    """Unicode codepoints of `text` as an int64 array (vectorized, no loop)."""
    if not text:
        return np.empty(0, dtype=np.int64)
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)


def _ngram_ids_np(codes: np.ndarray) -> np.ndarray:
    n = codes.shape[0]
    if n < 3:
        return np.empty(0, dtype=np.int64)
    return (codes[:-2] << (2 * _SHIFT)) | (codes[1:-1] << _SHIFT) | codes[2:]


def _hashed_ngram_counts_np(codes: np.ndarray, dim: int) -> np.ndarray:
    counts = np.zeros(dim, dtype=np.float64)
    n = codes.shape[0]
    if n < 3:
        return counts
    h = (codes[:-2] * _HASH_P1 + codes[1:-1] * _HASH_P2 + codes[2:]) % dim
    np.add.at(counts, h, 1.0)
    return counts


if HAS_NUMBA:

    @njit(cache=True)
    def _ngram_ids_nb(codes):  # pragma: no cover - exercised via dispatch
        n = codes.shape[0]
        if n < 3:
            return np.empty(0, dtype=np.int64)
        out = np.empty(n - 2, dtype=np.int64)
        for i in range(n - 2):
            out[i] = (codes[i] << 42) | (codes[i + 1] << 21) | codes[i + 2]
        return out

    @njit(cache=True)
    def _hashed_ngram_counts_nb(codes, dim):  # pragma: no cover
        counts = np.zeros(dim, dtype=np.float64)
        n = codes.shape[0]
        for i in range(n - 2):
            h = (codes[i] * 961 + codes[i + 1] * 31 + codes[i + 2]) % dim
            counts[h] += 1.0
        return counts

    ngram_ids_raw = _ngram_ids_nb
    hashed_ngram_counts = _hashed_ngram_counts_nb
else:
    ngram_ids_raw = _ngram_ids_np
    hashed_ngram_counts = _hashed_ngram_counts_np


def ngram_id_set(text: str) -> np.ndarray:
    """Sorted unique packed trigram ids of `text` (exact, collision-free)."""
    return np.unique(ngram_ids_raw(char_codes(text)))


def ngram_jaccard_ids(a: np.ndarray, b: np.ndarray) -> float:
    """Jaccard similarity of two sorted unique id arrays."""
    if a.shape[0] == 0 and b.shape[0] == 0:
        return 0.0
    inter = np.intersect1d(a, b, assume_unique=True).shape[0]
    union = a.shape[0] + b.shape[0] - inter
    return inter / union


def cosine_scores(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Dot products of unit-norm rows against a unit vector (BLAS matvec)."""
    if matrix.shape[0] == 0:
        return np.empty(0, dtype=np.float64)
    return matrix @ vec


def warmup() -> None:
    """Trigger JIT compilation up front so first-request latency stays flat."""
    codes = char_codes("warmup text")
    ngram_ids_raw(codes)
    hashed_ngram_counts(codes, 256)
