"""Small text helpers shared by signals and retrieval."""

import re

from . import kernels

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs."""
    return _TOKEN_RE.findall(text.lower())


def ngram_jaccard(a: str, b: str, n: int = 3) -> float:
    """Character n-gram Jaccard similarity in [0, 1].

    Empty-set pairs score 0; identical non-empty texts score 1. Only n=3 is
    accelerated; other sizes fall back to Python sets.
    """
    if n == 3:
        return kernels.ngram_jaccard_ids(kernels.ngram_id_set(a), kernels.ngram_id_set(b))
    grams_a = {a[i : i + n] for i in range(len(a) - n + 1)}
    grams_b = {b[i : i + n] for i in range(len(b) - n + 1)}
    if not grams_a and not grams_b:
        return 0.0
    union = grams_a | grams_b
    return len(grams_a & grams_b) / len(union)


def word_jaccard(a: str, b: str) -> float:
    """Word-level Jaccard similarity over the shared tokenizer."""
    set_a, set_b = set(tokenize(a)), set(tokenize(b))
    if not set_a and not set_b:
        return 0.0
    return len(set_a & set_b) / len(set_a | set_b)
