"""Slow, obviously-correct reference implementations for metric testing.

Everything here is written with plain dicts, loops, and itertools, no numpy
and no shared code with the package under test. The package must agree with
these to tight tolerances on small inputs.
"""

import itertools
import math
from collections import Counter


def lcs_length_ref(a, b):
    """Full-table LCS dynamic program."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[n][m]


def ngrams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def clipped_overlap(ref_grams, hyp_grams):
    ref_counts = Counter(ref_grams)
    hyp_counts = Counter(hyp_grams)
    return sum(min(ref_counts[g], count) for g, count in hyp_counts.items())


def prf(overlap, ref_total, hyp_total):
    p = overlap / hyp_total if hyp_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def rouge_n_ref(ref_tokens, hyp_tokens, n):
    ref_grams = ngrams(ref_tokens, n)
    hyp_grams = ngrams(hyp_tokens, n)
    return prf(clipped_overlap(ref_grams, hyp_grams), len(ref_grams), len(hyp_grams))


def rouge_l_ref(ref_tokens, hyp_tokens):
    return prf(lcs_length_ref(ref_tokens, hyp_tokens), len(ref_tokens), len(hyp_tokens))


def bleu_ref(ref_tokens, hyp_tokens, max_n=4, eps=1e-9):
    hyp_len, ref_len = len(hyp_tokens), len(ref_tokens)
    if hyp_len == 0:
        return 0.0
    max_order = min(max_n, hyp_len)
    log_sum = 0.0
    for n in range(1, max_order + 1):
        total = hyp_len - n + 1
        matches = clipped_overlap(ngrams(ref_tokens, n), ngrams(hyp_tokens, n))
        p_n = matches / total if matches else eps / total
        log_sum += math.log(p_n) / max_order
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return brevity * math.exp(log_sum)


def _stage_pairs(ref_words, hyp_words, ref_free, hyp_free, key):
    """All choices of pair sets for one matching stage, as position tuples."""
    by_key_ref, by_key_hyp = {}, {}
    for i in ref_free:
        by_key_ref.setdefault(key(ref_words[i]), []).append(i)
    for j in hyp_free:
        by_key_hyp.setdefault(key(hyp_words[j]), []).append(j)

    per_word_options = []
    for word_key in sorted(set(by_key_ref) & set(by_key_hyp), key=repr):
        refs, hyps = by_key_ref[word_key], by_key_hyp[word_key]
        k = min(len(refs), len(hyps))
        options = []
        for ref_choice in itertools.combinations(refs, k):
            for hyp_choice in itertools.permutations(hyps, k):
                options.append(list(zip(ref_choice, hyp_choice)))
        per_word_options.append(options)

    for combo in itertools.product(*per_word_options):
        yield [pair for group in combo for pair in group]


def chunk_count(pairs):
    ordered = sorted(pairs, key=lambda pair: pair[1])
    chunks = 0
    prev = None
    for ref_pos, hyp_pos in ordered:
        if prev is None or hyp_pos != prev[1] + 1 or ref_pos != prev[0] + 1:
            chunks += 1
        prev = (ref_pos, hyp_pos)
    return chunks


def meteor_ref(ref_tokens, hyp_tokens, stem=lambda w: w):
    """Exhaustive two-stage METEOR for tiny inputs.

    Stage one matches identical words, stage two matches leftover words with
    equal stems; the fragmentation penalty uses the minimum chunk count over
    every maximal alignment. Exponential, fine below ~10 tokens.
    """
    ref_words, hyp_words = list(ref_tokens), list(hyp_tokens)
    if not ref_words or not hyp_words:
        return 0.0

    best_chunks, match_count = None, 0
    all_ref = list(range(len(ref_words)))
    all_hyp = list(range(len(hyp_words)))
    for exact in _stage_pairs(ref_words, hyp_words, all_ref, all_hyp, key=lambda w: w):
        ref_left = [i for i in all_ref if i not in {p[0] for p in exact}]
        hyp_left = [j for j in all_hyp if j not in {p[1] for p in exact}]
        for stemmed in _stage_pairs(ref_words, hyp_words, ref_left, hyp_left,
                                    key=lambda w: ("s", stem(w))):
            pairs = exact + stemmed
            if not pairs:
                continue
            match_count = len(pairs)
            chunks = chunk_count(pairs)
            if best_chunks is None or chunks < best_chunks:
                best_chunks = chunks

    if not match_count:
        return 0.0
    precision = match_count / len(hyp_words)
    recall = match_count / len(ref_words)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (best_chunks / match_count) ** 3
    return f_mean * (1.0 - penalty)


def mmlu_ref(ref_logits, hyp_logits):
    rows = min(len(ref_logits), len(hyp_logits))
    diffs = [ref_logits[i][j] - hyp_logits[i][j]
             for i in range(rows) for j in range(len(ref_logits[i]))]
    return sum(diffs) / len(diffs)


def perplexity_ref(logprobs):
    return math.exp(-sum(logprobs) / len(logprobs))


def cosine_ref(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def embed_prf_ref(ref_vectors, hyp_vectors):
    if not ref_vectors or not hyp_vectors:
        return 0.0, 0.0, 0.0
    recall_parts = [max(max(cosine_ref(r, h) for h in hyp_vectors), 0.0)
                    for r in ref_vectors]
    precision_parts = [max(max(cosine_ref(r, h) for r in ref_vectors), 0.0)
                       for h in hyp_vectors]
    p = sum(precision_parts) / len(precision_parts)
    r = sum(recall_parts) / len(recall_parts)
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def dpo_loss_ref(policy_chosen, policy_rejected, ref_chosen, ref_rejected, beta):
    margin = beta * ((policy_chosen - ref_chosen) - (policy_rejected - ref_rejected))
    # softplus(-margin), computed naively; fine for moderate magnitudes
    return math.log(1.0 + math.exp(-margin))
