"""Metrics computed from model outputs: logits, logprobs, and embeddings."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ValidationError
from . import _kernels
from .lexical import Score, _prf


def mean_logit_difference(reference_logits, hypothesis_logits) -> float:
    """Mean elementwise difference between two logit matrices.

    Both inputs are (positions x vocabulary) arrays over the same
    vocabulary; the longer one is truncated to the shorter's position count
    before averaging. Identical inputs score exactly zero, and swapping the
    arguments exactly negates the result.
    """
    ref = np.asarray(reference_logits, dtype=np.float64)
    hyp = np.asarray(hypothesis_logits, dtype=np.float64)
    if ref.ndim != 2 or hyp.ndim != 2:
        raise ValidationError("logit inputs must be 2-dimensional")
    if ref.shape[1] != hyp.shape[1]:
        raise ValidationError(
            f"vocabulary widths differ: {ref.shape[1]} vs {hyp.shape[1]}")
    rows = min(ref.shape[0], hyp.shape[0])
    if rows == 0:
        raise ValidationError("no overlapping positions to compare")
    if not (np.isfinite(ref[:rows]).all() and np.isfinite(hyp[:rows]).all()):
        raise ValidationError("logit inputs contain non-finite values")
    return float(np.mean(ref[:rows] - hyp[:rows]))


def perplexity(logprobs) -> float:
    """exp of the negative mean token log-probability."""
    values = np.asarray(logprobs, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("perplexity needs a non-empty 1-d logprob array")
    if not np.isfinite(values).all():
        raise ValidationError("logprobs contain non-finite values")
    if (values > 0).any():
        raise ValidationError("log-probabilities cannot be positive")
    return float(math.exp(-values.mean()))


def embedding_score(reference_vectors, hypothesis_vectors) -> Score:
    """Greedy max-cosine precision/recall/F1 over token embeddings.

    Vectors are L2-normalized here, so the kernel's dot products are
    cosines. Negative best-matches clamp to zero to keep scores in [0, 1].
    Either side empty scores zero.
    """
    ref = np.asarray(reference_vectors, dtype=np.float64)
    hyp = np.asarray(hypothesis_vectors, dtype=np.float64)
    if ref.size == 0 or hyp.size == 0:
        return Score(0.0, 0.0, 0.0)
    if ref.ndim != 2 or hyp.ndim != 2:
        raise ValidationError("embedding inputs must be 2-dimensional")
    if ref.shape[1] != hyp.shape[1]:
        raise ValidationError(
            f"embedding widths differ: {ref.shape[1]} vs {hyp.shape[1]}")

    def normalize(matrix):
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        safe = np.where(norms == 0.0, 1.0, norms)
        return matrix / safe

    row_max, col_max = _kernels.pairwise_max(normalize(ref), normalize(hyp))
    recall = float(np.maximum(row_max, 0.0).mean())
    precision = float(np.maximum(col_max, 0.0).mean())
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Score(precision, recall, f1)
