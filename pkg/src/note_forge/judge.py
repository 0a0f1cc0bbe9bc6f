"""Qualitative review of generated summaries by an external judge model.

A judge receives the patient record, the candidate summary, and a seven
criterion rubric, and must answer with one score line per criterion plus
a final total line. The parser accepts the score-line variants observed
in real judge output ("Name: *3/10*.", "Name:*3/10*", "Name: 3/10").
"""

from __future__ import annotations

import json
import logging
import re
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import GatewayError, ScorecardParseError, ValidationError

logger = logging.getLogger(__name__)

CRITERIA = (
    "Accuracy",
    "Retention",
    "Objectivity",
    "Structure",
    "Coherence",
    "Grammar",
    "Readability",
)

# One-line guidance per criterion, shown to the judge.
CRITERION_GUIDANCE = {
    "Accuracy": "statements in the summary agree with the record; nothing is invented",
    "Retention": "the clinically important events of the stay are all kept",
    "Objectivity": "documented facts only, with no speculation or opinion",
    "Structure": "content is organized into sensible sections in a logical order",
    "Coherence": "sentences connect and the account can be followed without backtracking",
    "Grammar": "spelling, punctuation, and sentence construction are correct",
    "Readability": "a busy clinician could absorb it quickly",
}

SUMMARY_LINE_LABEL = "Summary of Scores"

_SCORE_AFTER = re.compile(r"(\d+)\s*/\s*10\b")
_TOTAL = re.compile(r"(\d+)\s*/\s*70\b")


def build_rubric_prompt(input_text: str, summary: str) -> str:
    """Rubric, format directive, record, then the candidate summary last."""
    if not input_text:
        raise ValidationError("input_text must be non-empty")
    if not summary:
        raise ValidationError("summary must be non-empty")
    rubric_lines = [f"- {name}: {CRITERION_GUIDANCE[name]}." for name in CRITERIA]
    return (
        "You are reviewing a machine-written summary of a hospital stay "
        "against the patient record it was produced from.\n"
        "Rate the summary on each criterion below with an integer from 0 "
        "(worst) to 10 (best).\n\n"
        + "\n".join(rubric_lines)
        + "\n\nAnswer with one line per criterion in the form "
        "`CriterionName: *N/10*` followed by a brief justification, and "
        f"finish with a final line `{SUMMARY_LINE_LABEL}: *T/70*` where T "
        "is the sum of the seven scores.\n\n"
        "Patient record:\n"
        + input_text
        + "\n\nCandidate summary:\n"
        + summary
    )


@dataclass(frozen=True)
class JudgeScorecard:
    scores: tuple  # seven ints, CRITERIA order
    total: int
    justifications: tuple
    stated_total: Optional[int] = None
    total_mismatch: bool = False

    def score(self, criterion: str) -> int:
        return self.scores[CRITERIA.index(criterion)]

    def as_dict(self) -> dict:
        return {
            "scores": {name: score for name, score in zip(CRITERIA, self.scores)},
            "total": self.total,
            "stated_total": self.stated_total,
            "total_mismatch": self.total_mismatch,
            "justifications": {
                name: text for name, text in zip(CRITERIA, self.justifications)},
        }


def parse_scorecard(response_text: str) -> JudgeScorecard:
    """Extract the seven scores and the total from a judge transcript.

    Rule: for each criterion, take the first `N/10` token after the first
    case-insensitive occurrence of the criterion name. The stated `T/70`
    total is recorded, but a computed total wins on disagreement.
    """
    found = {}
    missing = []
    for name in CRITERIA:
        name_match = re.search(re.escape(name), response_text, re.IGNORECASE)
        score_match = (_SCORE_AFTER.search(response_text, name_match.end())
                       if name_match else None)
        if score_match is None:
            missing.append(name)
            continue
        score = int(score_match.group(1))
        if not 0 <= score <= 10:
            raise ValidationError(
                f"{name} score {score} is outside 0..10")
        found[name] = (name_match.start(), score_match.end(), score)
    if missing:
        raise ScorecardParseError(missing)

    # justification for a criterion: text between its score token and the
    # next criterion line (or the total line), in document order
    summary_match = re.search(re.escape(SUMMARY_LINE_LABEL), response_text,
                              re.IGNORECASE)
    boundaries = sorted(start for start, _, _ in found.values())
    if summary_match:
        boundaries.append(summary_match.start())
    boundaries.append(len(response_text))
    justifications = []
    for name in CRITERIA:
        start, score_end, _ = found[name]
        next_boundary = min((b for b in boundaries if b > start
                             and b >= score_end), default=len(response_text))
        chunk = response_text[score_end:next_boundary]
        # drop the closing asterisk/punctuation of the score token itself
        justifications.append(re.sub(r"^[\s*.:,]+", "", chunk).strip())

    scores = tuple(found[name][2] for name in CRITERIA)
    computed = sum(scores)
    total_match = _TOTAL.search(response_text)
    stated = int(total_match.group(1)) if total_match else None
    mismatch = stated is not None and stated != computed
    if mismatch:
        logger.warning("scorecard states total %d but scores sum to %d; "
                       "using the computed value", stated, computed)
    return JudgeScorecard(scores=scores, total=computed,
                          justifications=tuple(justifications),
                          stated_total=stated, total_mismatch=mismatch)


@dataclass(frozen=True)
class JudgeTrial:
    summary_name: str
    trial: int
    transcript: str
    scorecard: Optional[JudgeScorecard]
    error: str = ""


@dataclass
class JudgeResult:
    trials: list

    def scorecards_for(self, summary_name: str) -> list:
        return [t.scorecard for t in self.trials
                if t.summary_name == summary_name and t.scorecard is not None]

    @property
    def scorecards(self) -> list:
        return [t.scorecard for t in self.trials if t.scorecard is not None]

    @property
    def failures(self) -> list:
        return [t for t in self.trials if t.scorecard is None]


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name) or "summary"


def judge(input_text: str, summaries, gateway, trials: int = 1,
          transcript_dir=None) -> JudgeResult:
    """Score each named summary `trials` times through the gateway.

    A failed trial (gateway error or unparseable transcript) is recorded
    and the remaining trials proceed. Transcripts, and parsed scorecards
    where parsing succeeded, are written under transcript_dir when given.
    """
    if trials < 1:
        raise ValidationError(f"trials must be at least 1, got {trials}")
    named = list(summaries.items() if isinstance(summaries, Mapping) else summaries)
    if transcript_dir is not None:
        transcript_dir = Path(transcript_dir)
        transcript_dir.mkdir(parents=True, exist_ok=True)

    results = []
    for name, summary in named:
        prompt = build_rubric_prompt(input_text, summary)
        for trial in range(1, trials + 1):
            transcript = ""
            scorecard = None
            error = ""
            try:
                transcript = gateway.generate(prompt)
                scorecard = parse_scorecard(transcript)
            except (GatewayError, ScorecardParseError, ValidationError) as exc:
                error = str(exc)
                logger.warning("judge trial %d for %r failed: %s",
                               trial, name, error)
            if transcript_dir is not None:
                stem = f"{_safe_name(name)}_trial{trial}"
                (transcript_dir / f"{stem}.txt").write_text(
                    transcript, encoding="utf-8")
                payload = (scorecard.as_dict() if scorecard
                           else {"error": error})
                (transcript_dir / f"{stem}.json").write_text(
                    json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            results.append(JudgeTrial(summary_name=name, trial=trial,
                                      transcript=transcript,
                                      scorecard=scorecard, error=error))
    return JudgeResult(trials=results)


@dataclass(frozen=True)
class JudgeAggregate:
    n: int
    criterion_means: tuple
    criterion_stds: tuple
    total_mean: float
    total_std: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "criteria": {
                name: {"mean": mean, "std": std}
                for name, mean, std in zip(CRITERIA, self.criterion_means,
                                           self.criterion_stds)},
            "total": {"mean": self.total_mean, "std": self.total_std},
        }


def mean_std(values: Sequence[float]) -> tuple:
    """Mean and population standard deviation."""
    if not values:
        raise ValidationError("cannot aggregate zero values")
    return (statistics.fmean(values), statistics.pstdev(values))


def aggregate(scorecards: Sequence[JudgeScorecard]) -> JudgeAggregate:
    if not scorecards:
        raise ValidationError("cannot aggregate zero scorecards")
    means = []
    stds = []
    for index in range(len(CRITERIA)):
        mean, std = mean_std([card.scores[index] for card in scorecards])
        means.append(mean)
        stds.append(std)
    total_mean, total_std = mean_std([card.total for card in scorecards])
    return JudgeAggregate(n=len(scorecards), criterion_means=tuple(means),
                          criterion_stds=tuple(stds), total_mean=total_mean,
                          total_std=total_std)


def render_markdown_report(aggregates: Mapping[str, JudgeAggregate]) -> str:
    """One markdown table: a row per system, mean (±std) per criterion."""
    header = "| System | " + " | ".join(CRITERIA) + " | Total |"
    rule = "|" + "---|" * (len(CRITERIA) + 2)
    lines = [header, rule]
    for name, agg in aggregates.items():
        cells = [f"{mean:.1f} (±{std:.2f})"
                 for mean, std in zip(agg.criterion_means, agg.criterion_stds)]
        cells.append(f"{agg.total_mean:.1f} (±{agg.total_std:.2f})")
        lines.append(f"| {name} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
