"""Quantitative evaluation metrics, computed in-repo without model weights."""

from ._kernels import PURE_NUMPY_ENV, USING_NUMBA
from .lexical import Score, bleu, lcs_length, meteor, rouge_l, rouge_n, tokenize
from .model_based import embedding_score, mean_logit_difference, perplexity
from .stemmer import stem

__all__ = [
    "PURE_NUMPY_ENV",
    "USING_NUMBA",
    "Score",
    "bleu",
    "embedding_score",
    "lcs_length",
    "mean_logit_difference",
    "meteor",
    "perplexity",
    "rouge_l",
    "rouge_n",
    "stem",
    "tokenize",
]
