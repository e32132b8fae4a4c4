"""Keyword signal: regex, BM25, and character-n-gram matching with Boolean
combinators (AND / OR / NOR over the pattern set)."""

from __future__ import annotations

import math
import re
from collections import Counter

from ..config import KeywordParams
from ..textutil import ngram_jaccard, tokenize

BM25_K1 = 1.2


def compile_patterns(params: KeywordParams) -> list[re.Pattern]:
    """Word-boundary-wrapped compiled regexes; invalid patterns were already
    rejected at config load."""
    flags = 0 if params.case_sensitive else re.IGNORECASE
    return [re.compile(rf"\b(?:{p})\b", flags) for p in params.keywords]


def _bm25_keyword_score(keyword: str, doc_counts: Counter, doc_len: int) -> float:
    """Okapi score of one keyword against the request as a single-document
    corpus. With N=1 and avgdl = doc length the length-normalization term is
    1, so each term contributes idf(t) * tf*(k1+1)/(tf+k1)."""
    score = 0.0
    for term in tokenize(keyword):
        tf = doc_counts.get(term, 0)
        if tf == 0:
            continue
        idf = math.log(1.0 + 0.5 / 1.5)  # N=1, df=1
        score += idf * (tf * (BM25_K1 + 1.0)) / (tf + BM25_K1)
    return score


def _combine(flags: list[bool], operator: str) -> bool:
    if operator == "and":
        return all(flags)
    if operator == "or":
        return any(flags)
    return not any(flags)  # nor = not(or)


def keyword_match(
    params: KeywordParams, text: str, compiled: list[re.Pattern] | None = None
) -> tuple[bool, float]:
    """Evaluate one keyword rule against request text.

    Regex matches carry confidence 1.0. BM25 and n-gram carry a graded score
    (capped at 1.0); a rule matched through NOR reports 1.0 since there is no
    positive score to grade.
    """
    if params.method == "regex":
        patterns = compiled if compiled is not None else compile_patterns(params)
        flags = [bool(p.search(text)) for p in patterns]
        matched = _combine(flags, params.operator)
        return matched, 1.0 if matched else 0.0

    if params.method == "bm25":
        doc_tokens = tokenize(text)
        doc_counts = Counter(doc_tokens)
        scores = [_bm25_keyword_score(k, doc_counts, len(doc_tokens)) for k in params.keywords]
        flags = [s >= params.threshold for s in scores]
        matched = _combine(flags, params.operator)
        if not matched:
            return False, 0.0
        positive = [s for s, f in zip(scores, flags) if f]
        return True, min(1.0, max(positive)) if positive else 1.0

    # ngram: trigram Jaccard between each keyword and the request text
    if params.case_sensitive:
        sims = [ngram_jaccard(k, text) for k in params.keywords]
    else:
        lowered = text.lower()
        sims = [ngram_jaccard(k.lower(), lowered) for k in params.keywords]
    flags = [s >= params.threshold for s in sims]
    matched = _combine(flags, params.operator)
    if not matched:
        return False, 0.0
    positive = [s for s, f in zip(sims, flags) if f]
    return True, max(positive) if positive else 1.0
