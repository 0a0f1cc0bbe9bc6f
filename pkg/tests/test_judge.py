import json
import random
from pathlib import Path

import pytest

from note_forge.errors import GatewayError, ScorecardParseError, ValidationError
from note_forge.gateway import hash_int
from note_forge.judge import (
    CRITERIA,
    JudgeScorecard,
    aggregate,
    build_rubric_prompt,
    judge,
    mean_std,
    parse_scorecard,
    render_markdown_report,
)

DATA = Path(__file__).parent / "data"

LOW_SCORES = (2, 1, 2, 3, 2, 3, 2)
HIGH_SCORES = (8, 7, 8, 9, 8, 9, 8)


@pytest.fixture(scope="module")
def low_transcript():
    return (DATA / "transcript_low.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="module")
def high_transcript():
    return (DATA / "transcript_high.txt").read_text(encoding="utf-8")


# --- parsing ----------------------------------------------------------------

def test_parse_low_transcript(low_transcript):
    card = parse_scorecard(low_transcript)
    assert card.scores == LOW_SCORES
    assert card.total == 15
    assert card.stated_total == 15
    assert not card.total_mismatch


def test_parse_high_transcript_compact_style(high_transcript):
    card = parse_scorecard(high_transcript)
    assert card.scores == HIGH_SCORES
    assert card.total == 57
    assert card.stated_total == 57
    assert not card.total_mismatch


def test_parse_extracts_justifications(low_transcript):
    card = parse_scorecard(low_transcript)
    accuracy = card.justifications[CRITERIA.index("Accuracy")]
    assert accuracy.startswith("Several dates and medication doses")
    readability = card.justifications[CRITERIA.index("Readability")]
    assert "rereading" in readability


def _transcript_for(scores, line_template="{name}: *{n}/10*. Fine.",
                    total_line="Summary of Scores: *{t}/70*"):
    lines = [line_template.format(name=name, n=score)
             for name, score in zip(CRITERIA, scores)]
    if total_line:
        lines.append(total_line.format(t=sum(scores)))
    return "\n".join(lines)


@pytest.mark.parametrize("template", [
    "{name}: *{n}/10*. Noted.",
    "{name}: *{n}/10* Noted.",
    "{name}:*{n}/10*. Noted.",
    "{name}: {n}/10 Noted.",
    "{name} - {n}/10",
])
def test_parse_score_line_variants(template):
    card = parse_scorecard(_transcript_for(HIGH_SCORES, line_template=template))
    assert card.scores == HIGH_SCORES


def test_parse_missing_criterion_named():
    text = _transcript_for(LOW_SCORES).replace("Grammar", "Syntax")
    with pytest.raises(ScorecardParseError) as excinfo:
        parse_scorecard(text)
    assert "Grammar" in str(excinfo.value)
    assert excinfo.value.missing == ["Grammar"]


def test_parse_lists_all_missing_criteria():
    with pytest.raises(ScorecardParseError) as excinfo:
        parse_scorecard("no scores here at all")
    assert list(excinfo.value.missing) == list(CRITERIA)


def test_parse_total_mismatch_computed_wins():
    text = _transcript_for(HIGH_SCORES,
                           total_line="Summary of Scores: *60/70*")
    card = parse_scorecard(text)
    assert card.total == 57
    assert card.stated_total == 60
    assert card.total_mismatch


def test_parse_without_total_line():
    card = parse_scorecard(_transcript_for(LOW_SCORES, total_line=None))
    assert card.total == 15
    assert card.stated_total is None
    assert not card.total_mismatch


def test_parse_rejects_out_of_range_score():
    text = _transcript_for(LOW_SCORES).replace("*2/10*", "*11/10*", 1)
    with pytest.raises(ValidationError, match="11"):
        parse_scorecard(text)


def test_parse_round_trips_fuzzed_transcripts():
    rng = random.Random(5150)
    templates = [
        "{name}: *{n}/10*. {filler}",
        "{name}:*{n}/10*. {filler}",
        "{name}: {n}/10 {filler}",
        "{name}: *{n}/10* {filler}",
    ]
    fillers = [
        "Noted without further comment.",
        "Brief remark only.",
        "Consistent with the record overall.",
        "Could be tightened further.",
        "No additional concerns raised.",
    ]
    for _ in range(1000):
        scores = tuple(rng.randint(0, 10) for _ in CRITERIA)
        lines = []
        if rng.random() < 0.3:
            lines.append("Assessment of the candidate text follows.")
            lines.append("")
        for name, score in zip(CRITERIA, scores):
            template = rng.choice(templates)
            lines.append(template.format(name=name, n=score,
                                         filler=rng.choice(fillers)))
        has_total = rng.random() >= 0.2
        if has_total:
            sep = rng.choice([": *", ":*"])
            lines.append(f"Summary of Scores{sep}{sum(scores)}/70*")
        card = parse_scorecard("\n".join(lines))
        assert card.scores == scores
        assert card.total == sum(scores)
        assert card.stated_total == (sum(scores) if has_total else None)
        assert not card.total_mismatch


# --- prompt -----------------------------------------------------------------

def test_prompt_contains_each_criterion_exactly_once():
    prompt = build_rubric_prompt("the record body", "the final text body")
    for name in CRITERIA:
        assert prompt.count(name) == 1


def test_prompt_contains_format_directive():
    prompt = build_rubric_prompt("record", "summary text")
    assert "*N/10*" in prompt
    assert "Summary of Scores" in prompt
    assert "*T/70*" in prompt


def test_prompt_ends_with_summary():
    summary = "Patient admitted with chest pain and discharged improved."
    prompt = build_rubric_prompt("some record", summary)
    assert prompt.endswith(summary)
    assert "some record" in prompt


@pytest.mark.parametrize("record,summary", [("", "s"), ("r", "")])
def test_prompt_rejects_empty_inputs(record, summary):
    with pytest.raises(ValidationError):
        build_rubric_prompt(record, summary)


# --- judging through a gateway ----------------------------------------------

class FakeGateway:
    def __init__(self, responses):
        self._responses = list(responses)
        self.calls = 0

    def generate(self, prompt, params=None):
        item = self._responses[min(self.calls, len(self._responses) - 1)]
        self.calls += 1
        if isinstance(item, Exception):
            raise item
        return item


def test_judge_parses_fixed_transcript(low_transcript):
    gateway = FakeGateway([low_transcript])
    result = judge("record", {"baseline": "a summary"}, gateway)
    assert len(result.trials) == 1
    assert result.scorecards[0].scores == LOW_SCORES


def test_judge_counts_summaries_times_trials(low_transcript):
    gateway = FakeGateway([low_transcript])
    result = judge("record", {"a": "one", "b": "two"}, gateway, trials=3)
    assert len(result.trials) == 6
    assert len(result.scorecards_for("a")) == 3
    assert len(result.scorecards_for("b")) == 3
    assert gateway.calls == 6


def test_judge_records_failed_trial_and_continues(low_transcript):
    gateway = FakeGateway([
        low_transcript,
        GatewayError("model host went away"),
        low_transcript,
    ])
    result = judge("record", {"only": "text"}, gateway, trials=3)
    assert len(result.scorecards) == 2
    assert len(result.failures) == 1
    assert result.failures[0].trial == 2
    assert "went away" in result.failures[0].error


def test_judge_persists_transcripts(tmp_path, low_transcript):
    gateway = FakeGateway([low_transcript])
    judge("record", {"base line": "text"}, gateway, trials=2,
          transcript_dir=tmp_path)
    texts = sorted(p.name for p in tmp_path.glob("*.txt"))
    assert texts == ["base_line_trial1.txt", "base_line_trial2.txt"]
    parsed = json.loads((tmp_path / "base_line_trial1.json").read_text())
    assert parsed["total"] == 15
    assert parsed["scores"]["Retention"] == 1


def test_judge_rejects_zero_trials():
    with pytest.raises(ValidationError):
        judge("record", {"a": "b"}, FakeGateway(["x"]), trials=0)


def test_judge_against_live_mock(gateway_client):
    result = judge("admitted overnight for observation",
                   {"candidate": "Stable overnight stay, discharged well."},
                   gateway_client, trials=2)
    assert len(result.scorecards) == 2
    assert result.scorecards[0] == result.scorecards[1]
    # the mock's published rule: score_i = hash(seed, "judge", prompt, i) % 11
    prompt = build_rubric_prompt("admitted overnight for observation",
                                 "Stable overnight stay, discharged well.")
    expected = tuple(hash_int(0, "judge", prompt, i) % 11
                     for i in range(len(CRITERIA)))
    assert result.scorecards[0].scores == expected
    assert result.scorecards[0].total == sum(expected)


# --- aggregation ------------------------------------------------------------

def _card(scores):
    return JudgeScorecard(scores=tuple(scores), total=sum(scores),
                          justifications=tuple("" for _ in scores))


def test_aggregate_single_scorecard():
    card = _card(HIGH_SCORES)
    agg = aggregate([card])
    assert agg.n == 1
    assert agg.criterion_means == tuple(float(s) for s in HIGH_SCORES)
    assert all(std == 0.0 for std in agg.criterion_stds)
    assert agg.total_mean == 57.0
    assert agg.total_std == 0.0


def test_mean_std_hand_arithmetic():
    mean, std = mean_std([30.0, 30.4])
    assert mean == pytest.approx(30.2, abs=1e-12)
    assert std == pytest.approx(0.2, abs=1e-12)


def test_aggregate_uses_population_std():
    # pstdev of {2, 4} is 1; sample stdev would be sqrt(2)
    agg = aggregate([_card((2,) * 7), _card((4,) * 7)])
    assert agg.criterion_stds[0] == pytest.approx(1.0, abs=1e-12)


def test_aggregate_permutation_invariant():
    cards = [_card(LOW_SCORES), _card(HIGH_SCORES), _card((5,) * 7)]
    forward = aggregate(cards)
    backward = aggregate(list(reversed(cards)))
    assert forward == backward


def test_aggregate_total_mean_equals_sum_of_criterion_means():
    rng = random.Random(88)
    cards = [_card(tuple(rng.randint(0, 10) for _ in CRITERIA))
             for _ in range(25)]
    agg = aggregate(cards)
    assert agg.total_mean == pytest.approx(sum(agg.criterion_means), abs=1e-9)


def test_aggregate_empty_raises():
    with pytest.raises(ValidationError):
        aggregate([])


def test_markdown_report_layout():
    report = render_markdown_report({
        "baseline": aggregate([_card(LOW_SCORES)]),
        "tuned": aggregate([_card(HIGH_SCORES), _card(HIGH_SCORES)]),
    })
    lines = report.strip().splitlines()
    assert lines[0].startswith("| System |")
    for name in CRITERIA:
        assert name in lines[0]
    assert "| baseline |" in report
    assert "15.0 (±0.00)" in report
    assert "57.0 (±0.00)" in report
