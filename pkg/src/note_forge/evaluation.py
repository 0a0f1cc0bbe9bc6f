"""Scores a (reference, hypothesis) summary pair across every metric.

Lexical metrics are computed in-process. The model-based three (mean
logit difference, perplexity, embedding similarity) go through a gateway
and can each be skipped; a skipped metric is reported as absent, never
as zero.
"""

from __future__ import annotations

import csv
import json
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import GatewayError, ValidationError
from .metrics import (
    Score,
    bleu,
    embedding_score,
    mean_logit_difference,
    meteor,
    perplexity,
    rouge_l,
    rouge_n,
    tokenize,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricReport:
    pair_id: str
    rouge1: Score
    rouge2: Score
    rougeL: Score
    bleu: float
    meteor: float
    mmlu: Optional[float] = None
    perplexity: Optional[float] = None
    embed: Optional[Score] = None

    def as_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "rouge1": self.rouge1.as_dict(),
            "rouge2": self.rouge2.as_dict(),
            "rougeL": self.rougeL.as_dict(),
            "bleu": self.bleu,
            "meteor": self.meteor,
            "mmlu": self.mmlu,
            "perplexity": self.perplexity,
            "embed": self.embed.as_dict() if self.embed is not None else None,
        }


def _gateway_call(metric: str, call):
    try:
        return call()
    except GatewayError as exc:
        raise GatewayError(f"computing {metric}: {exc}",
                           endpoint=exc.endpoint, status=exc.status) from exc


def evaluate_pair(reference: str, hypothesis: str, gateway=None, *,
                  pair_id: str = "pair", lexical_only: bool = False,
                  skip_mmlu: bool = False, skip_perplexity: bool = False,
                  skip_embed: bool = False) -> MetricReport:
    """All requested metrics for one pair.

    Model-based metrics additionally come back absent when either text
    has no tokens (there is nothing to send to the model).
    """
    if lexical_only:
        skip_mmlu = skip_perplexity = skip_embed = True
    needs_gateway = not (skip_mmlu and skip_perplexity and skip_embed)
    if needs_gateway and gateway is None:
        raise ValidationError(
            "a gateway is required unless the model-based metrics are skipped")

    report = {
        "pair_id": pair_id,
        "rouge1": rouge_n(reference, hypothesis, 1),
        "rouge2": rouge_n(reference, hypothesis, 2),
        "rougeL": rouge_l(reference, hypothesis),
        "bleu": bleu(reference, hypothesis),
        "meteor": meteor(reference, hypothesis),
        "mmlu": None,
        "perplexity": None,
        "embed": None,
    }

    ref_tokens = tokenize(reference)
    hyp_tokens = tokenize(hypothesis)
    have_tokens = bool(ref_tokens) and bool(hyp_tokens)
    if needs_gateway and not have_tokens:
        logger.debug("pair %s: empty token side, model metrics absent", pair_id)

    if not skip_mmlu and have_tokens:
        ref_logits = _gateway_call("mmlu", lambda: gateway.logits(reference))
        hyp_logits = _gateway_call("mmlu", lambda: gateway.logits(hypothesis))
        report["mmlu"] = mean_logit_difference(ref_logits, hyp_logits)
    if not skip_perplexity and have_tokens:
        logprobs = _gateway_call("perplexity",
                                 lambda: gateway.logprobs(hypothesis))
        if logprobs:
            report["perplexity"] = perplexity(logprobs)
        else:
            # a one-token hypothesis has no conditional positions
            logger.debug("pair %s: no conditional logprobs", pair_id)
    if not skip_embed and have_tokens:
        ref_vectors = _gateway_call("embed", lambda: gateway.embed(ref_tokens))
        hyp_vectors = _gateway_call("embed", lambda: gateway.embed(hyp_tokens))
        report["embed"] = embedding_score(ref_vectors, hyp_vectors)

    return MetricReport(**report)


def evaluate_batch(pairs: Sequence[tuple], gateway=None,
                   **flags) -> list:
    """pairs: (pair_id, reference, hypothesis) triples, evaluated in order."""
    return [evaluate_pair(reference, hypothesis, gateway, pair_id=pair_id,
                          **flags)
            for pair_id, reference, hypothesis in pairs]


def write_report_json(report: MetricReport, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.as_dict(), indent=2) + "\n",
                    encoding="utf-8")
    return path


_CSV_COLUMNS = [
    "pair_id",
    "rouge1_precision", "rouge1_recall", "rouge1_f1",
    "rouge2_precision", "rouge2_recall", "rouge2_f1",
    "rougeL_precision", "rougeL_recall", "rougeL_f1",
    "bleu", "meteor", "mmlu", "perplexity",
    "embed_precision", "embed_recall", "embed_f1",
]


def _csv_row(report: MetricReport) -> dict:
    flat = {"pair_id": report.pair_id, "bleu": report.bleu,
            "meteor": report.meteor, "mmlu": report.mmlu,
            "perplexity": report.perplexity}
    for name in ("rouge1", "rouge2", "rougeL", "embed"):
        score = getattr(report, name)
        for part in ("precision", "recall", "f1"):
            flat[f"{name}_{part}"] = (getattr(score, part)
                                      if score is not None else None)
    return flat


def write_batch_csv(reports: Sequence[MetricReport], path) -> Path:
    """One row per pair plus a final mean row over the populated cells."""
    if not reports:
        raise ValidationError("no reports to write")
    path = Path(path)
    rows = [_csv_row(r) for r in reports]
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=_CSV_COLUMNS,
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v)
                             for k, v in row.items()})
        means = {"pair_id": "mean"}
        for column in _CSV_COLUMNS[1:]:
            values = [row[column] for row in rows if row[column] is not None]
            means[column] = statistics.fmean(values) if values else ""
        writer.writerow(means)
    return path
