"""Surface-overlap metrics computed from scratch.

All functions accept raw strings or pre-tokenized lists. Scores are floats
in [0, 1]; empty inputs yield zero rather than raising, matching how the
batch evaluator treats degenerate generations.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels
from .stemmer import stem

_TOKEN_RE = re.compile(r"\w+")
_BLEU_EPS = 1e-9

TextOrTokens = Union[str, Sequence[str]]


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; punctuation is discarded."""
    return _TOKEN_RE.findall(text.lower())


def _tokens(value: TextOrTokens) -> list[str]:
    if isinstance(value, str):
        return tokenize(value)
    return list(value)


@dataclass(frozen=True)
class Score:
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _prf(overlap: float, ref_total: int, hyp_total: int) -> Score:
    precision = overlap / hyp_total if hyp_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Score(precision, recall, f1)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _clipped(ref_counts: Counter, hyp_counts: Counter) -> int:
    return sum(min(ref_counts[gram], count) for gram, count in hyp_counts.items())


def rouge_n(reference: TextOrTokens, hypothesis: TextOrTokens, n: int) -> Score:
    """Clipped n-gram overlap precision/recall/F1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ref = _tokens(reference)
    hyp = _tokens(hypothesis)
    ref_counts = _ngram_counts(ref, n)
    hyp_counts = _ngram_counts(hyp, n)
    overlap = _clipped(ref_counts, hyp_counts)
    return _prf(overlap, sum(ref_counts.values()), sum(hyp_counts.values()))


def _encode(ref: Sequence[str], hyp: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    vocab: dict[str, int] = {}
    def ids(tokens):
        return np.array([vocab.setdefault(t, len(vocab)) for t in tokens], dtype=np.int64)
    return ids(ref), ids(hyp)


def lcs_length(reference: TextOrTokens, hypothesis: TextOrTokens) -> int:
    ref_ids, hyp_ids = _encode(_tokens(reference), _tokens(hypothesis))
    return _kernels.lcs_length(ref_ids, hyp_ids)


def rouge_l(reference: TextOrTokens, hypothesis: TextOrTokens) -> Score:
    """Longest-common-subsequence precision/recall/F1."""
    ref = _tokens(reference)
    hyp = _tokens(hypothesis)
    ref_ids, hyp_ids = _encode(ref, hyp)
    return _prf(_kernels.lcs_length(ref_ids, hyp_ids), len(ref), len(hyp))


def bleu(reference: TextOrTokens, hypothesis: TextOrTokens, max_n: int = 4) -> float:
    """Single-reference BLEU with brevity penalty.

    Orders above the hypothesis length are skipped entirely, so a two-word
    hypothesis is scored on unigrams and bigrams only. A zero-match order
    contributes a floor probability instead of zeroing the whole score.
    """
    ref = _tokens(reference)
    hyp = _tokens(hypothesis)
    if not hyp:
        return 0.0
    max_order = min(max_n, len(hyp))
    log_sum = 0.0
    for n in range(1, max_order + 1):
        total = len(hyp) - n + 1
        matches = _clipped(_ngram_counts(ref, n), _ngram_counts(hyp, n))
        p_n = matches / total if matches else _BLEU_EPS / total
        log_sum += math.log(p_n) / max_order
    brevity = 1.0 if len(hyp) >= len(ref) else math.exp(1.0 - len(ref) / len(hyp))
    return brevity * math.exp(log_sum)


# meteor: exhaustive chunk minimization is exponential, so cap the search
# and fall back to a left-to-right greedy alignment on big inputs
_EXHAUSTIVE_LIMIT = 10


def _stage_quotas(ref: list, hyp: list, ref_free: list, hyp_free: list, key):
    """Pair quota per key class for one matching stage."""
    ref_counts = Counter(key(ref[i]) for i in ref_free)
    hyp_counts = Counter(key(hyp[j]) for j in hyp_free)
    return {k: min(ref_counts[k], c) for k, c in hyp_counts.items() if ref_counts[k]}


def _candidates(ref: list, hyp: list):
    """Per-hyp-position candidate ref positions and per-class quotas.

    Stage one pairs identical words; stage two pairs leftovers whose stems
    agree. Returns (cands, total) where cands[j] is the list of ref
    positions hyp position j may use.
    """
    all_ref = list(range(len(ref)))
    all_hyp = list(range(len(hyp)))
    exact_q = _stage_quotas(ref, hyp, all_ref, all_hyp, lambda w: w)

    # leftover occurrences per word after the exact stage, in position order
    ref_left, used = [], Counter()
    for i in all_ref:
        if used[ref[i]] < exact_q.get(ref[i], 0):
            used[ref[i]] += 1
        else:
            ref_left.append(i)
    hyp_left, used = [], Counter()
    for j in all_hyp:
        if used[hyp[j]] < exact_q.get(hyp[j], 0):
            used[hyp[j]] += 1
        else:
            hyp_left.append(j)
    stem_q = _stage_quotas(ref, hyp, ref_left, hyp_left, lambda w: ("s", stem(w)))

    total = sum(exact_q.values()) + sum(stem_q.values())
    return exact_q, stem_q, total


def _min_chunks_exhaustive(ref: list, hyp: list, exact_q, stem_q, total) -> int:
    """Branch-and-bound over alignments; exact for small inputs."""
    best = [total + 1]
    ref_word = {i: ref[i] for i in range(len(ref))}

    def compatible(j, i, exact_used, stem_used):
        word_h, word_r = hyp[j], ref_word[i]
        if word_h == word_r:
            return "e" if exact_used[word_h] < exact_q.get(word_h, 0) else None
        key = ("s", stem(word_r))
        if ("s", stem(word_h)) == key and stem_used[key] < stem_q.get(key, 0):
            return "s"
        return None

    def walk(j, used_mask, exact_used, stem_used, matched, chunks, last):
        if chunks >= best[0]:
            return
        if j == len(hyp):
            if matched == total:
                best[0] = chunks
            return
        # prune: not enough positions left to reach the required total
        if matched + (len(hyp) - j) < total:
            return
        for i in range(len(ref)):
            if used_mask & (1 << i):
                continue
            stage = compatible(j, i, exact_used, stem_used)
            if stage is None:
                continue
            new_chunks = chunks + (0 if last == (j - 1, i - 1) else 1)
            if stage == "e":
                exact_used[hyp[j]] += 1
            else:
                stem_used[("s", stem(hyp[j]))] += 1
            walk(j + 1, used_mask | (1 << i), exact_used, stem_used,
                 matched + 1, new_chunks, (j, i))
            if stage == "e":
                exact_used[hyp[j]] -= 1
            else:
                stem_used[("s", stem(hyp[j]))] -= 1
        walk(j + 1, used_mask, exact_used, stem_used, matched, chunks, last)

    walk(0, 0, Counter(), Counter(), 0, 0, (-2, -2))
    return best[0]


def _min_chunks_greedy(ref: list, hyp: list, exact_q, stem_q) -> int:
    """Left-to-right alignment preferring the continuation of the current run."""
    used = set()
    exact_used, stem_used = Counter(), Counter()
    chunks, last = 0, (-2, -2)
    for j, word in enumerate(hyp):
        stem_key = ("s", stem(word))
        choice = stage = None
        preferred = last[1] + 1 if last[0] == j - 1 else None
        candidates = []
        if preferred is not None and preferred < len(ref) and preferred not in used:
            candidates.append(preferred)
        candidates.extend(i for i in range(len(ref)) if i not in used)
        for i in candidates:
            if ref[i] == word and exact_used[word] < exact_q.get(word, 0):
                choice, stage = i, "e"
                break
            if (ref[i] != word and ("s", stem(ref[i])) == stem_key
                    and stem_used[stem_key] < stem_q.get(stem_key, 0)):
                choice, stage = i, "s"
                break
        if choice is None:
            continue
        used.add(choice)
        if stage == "e":
            exact_used[word] += 1
        else:
            stem_used[stem_key] += 1
        chunks += 0 if last == (j - 1, choice - 1) else 1
        last = (j, choice)
    return max(chunks, 1)


def meteor(reference: TextOrTokens, hypothesis: TextOrTokens) -> float:
    """Unigram matching (exact, then stemmed) with a fragmentation penalty."""
    ref = _tokens(reference)
    hyp = _tokens(hypothesis)
    if not ref or not hyp:
        return 0.0
    exact_q, stem_q, total = _candidates(ref, hyp)
    if total == 0:
        return 0.0
    if max(len(ref), len(hyp)) <= _EXHAUSTIVE_LIMIT:
        chunks = _min_chunks_exhaustive(ref, hyp, exact_q, stem_q, total)
    else:
        chunks = _min_chunks_greedy(ref, hyp, exact_q, stem_q)
    precision = total / len(hyp)
    recall = total / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (chunks / total) ** 3
    return f_mean * (1.0 - penalty)
