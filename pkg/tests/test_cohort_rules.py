"""Cohort rule boundaries, rule ordering, and vocabulary thresholds."""

import datetime as dt
import random
from pathlib import Path

import pytest

from note_forge.cohort import (
    AgeResult,
    build_vocabularies,
    compute_age,
    los_days,
    pick_reference_summary,
    select_cohort,
)
from note_forge.errors import ValidationError
from note_forge.ingest import (
    Admission,
    NoteCategory,
    NoteRow,
    Patient,
    TableKind,
    build_admission_index,
    parse_table,
)

EMR = Path(__file__).resolve().parent.parent / "src" / "note_forge" / "fixtures" / "emr"


def load(name, kind):
    return parse_table(EMR / name, kind).records


def fixture_index():
    return build_admission_index(load("PATIENTS.csv", TableKind.PATIENTS),
                                 load("ADMISSIONS.csv", TableKind.ADMISSIONS))


def make_admission(hadm, subject, admit, disch):
    return Admission(hadm_id=hadm, subject_id=subject, admittime=admit,
                     dischtime=disch, admission_type="EMERGENCY", admit_diagnosis="")


def make_ds(row_id, hadm, when, words):
    return NoteRow(row_id=row_id, hadm_id=hadm, chartdate=when.date(), charttime=when,
                   category=NoteCategory.DS, raw_text=" ".join(["word"] * words))


# --- age --------------------------------------------------------------------

def test_age_on_shifted_dates():
    result = compute_age(dt.datetime(2040, 3, 16), dt.datetime(2121, 5, 29, 5, 10))
    assert result == AgeResult(81, clamped=False)


def test_age_clamps_far_shifted_dob():
    result = compute_age(dt.datetime(1821, 6, 5), dt.datetime(2121, 10, 11))
    assert result.years == 90
    assert result.clamped


def test_age_before_birth_raises():
    with pytest.raises(ValidationError):
        compute_age(dt.datetime(2100, 1, 1), dt.datetime(2099, 12, 31))


def test_age_is_floored():
    dob = dt.datetime(2100, 1, 1)
    assert compute_age(dob, dt.datetime(2118, 12, 31)).years == 18
    assert compute_age(dob, dt.datetime(2119, 6, 1)).years == 19


# --- rule boundaries --------------------------------------------------------

def run_single(patient, admission, notes):
    index = build_admission_index([patient], [admission])
    return select_cohort(index, notes)


ADULT = Patient(subject_id=1, gender="F", dob=dt.datetime(2060, 1, 1))


def test_age_18_excluded_19_included():
    teen = Patient(subject_id=2, gender="M", dob=dt.datetime(2103, 1, 1))
    admission = make_admission(20, 2, dt.datetime(2121, 6, 1, 8), dt.datetime(2121, 6, 3, 8))
    result = run_single(teen, admission, [make_ds(1, 20, dt.datetime(2121, 6, 3), 100)])
    assert [e.reason for e in result.exclusions] == ["age"]

    adult = Patient(subject_id=3, gender="M", dob=dt.datetime(2101, 1, 1))
    admission = make_admission(21, 3, dt.datetime(2121, 6, 1, 8), dt.datetime(2121, 6, 3, 8))
    result = run_single(adult, admission, [make_ds(1, 21, dt.datetime(2121, 6, 3), 100)])
    assert len(result.members) == 1


def test_los_exactly_seven_days_excluded():
    admit = dt.datetime(2121, 6, 1, 8, 0)
    admission = make_admission(30, 1, admit, admit + dt.timedelta(days=7))
    result = run_single(ADULT, admission, [make_ds(1, 30, admit + dt.timedelta(days=7), 100)])
    assert [e.reason for e in result.exclusions] == ["los"]


def test_los_just_under_seven_days_included():
    admit = dt.datetime(2121, 6, 1, 8, 0)
    admission = make_admission(31, 1, admit, admit + dt.timedelta(days=6, hours=23))
    result = run_single(ADULT, admission, [make_ds(1, 31, admit + dt.timedelta(days=6), 100)])
    assert len(result.members) == 1
    assert los_days(admission) == pytest.approx(6.958333, abs=1e-5)


def test_missing_discharge_summary_excluded():
    admission = make_admission(32, 1, dt.datetime(2121, 6, 1), dt.datetime(2121, 6, 3))
    nursing = NoteRow(row_id=5, hadm_id=32, chartdate=dt.date(2121, 6, 2), charttime=None,
                      category=NoteCategory.NURSING_OTHER, raw_text="stable overnight")
    result = run_single(ADULT, admission, [nursing])
    assert [e.reason for e in result.exclusions] == ["ds_missing"]


def test_summary_word_limit_boundary():
    admission = make_admission(33, 1, dt.datetime(2121, 6, 1), dt.datetime(2121, 6, 3))
    at_limit = run_single(ADULT, admission, [make_ds(1, 33, dt.datetime(2121, 6, 3), 500)])
    assert len(at_limit.members) == 1
    assert at_limit.members[0].reference_words == 500

    over = run_single(ADULT, admission, [make_ds(1, 33, dt.datetime(2121, 6, 3), 501)])
    assert [e.reason for e in over.exclusions] == ["ds_length"]


def test_word_limit_uses_cleaned_text():
    # 501 raw tokens, but two of them are a de-id span that cleans to one word
    admission = make_admission(34, 1, dt.datetime(2121, 6, 1), dt.datetime(2121, 6, 3))
    raw = " ".join(["word"] * 499) + " [**Hospital 3**]"
    ds = NoteRow(row_id=1, hadm_id=34, chartdate=dt.date(2121, 6, 3), charttime=None,
                 category=NoteCategory.DS, raw_text=raw)
    assert len(raw.split()) == 501
    result = run_single(ADULT, admission, [ds])
    assert len(result.members) == 1
    assert result.members[0].reference_words == 500


def test_first_failing_rule_wins():
    # fails age AND has no discharge summary; only age is reported
    teen = Patient(subject_id=9, gender="F", dob=dt.datetime(2110, 1, 1))
    admission = make_admission(40, 9, dt.datetime(2121, 6, 1), dt.datetime(2121, 6, 3))
    result = run_single(teen, admission, [])
    assert [e.reason for e in result.exclusions] == ["age"]


# --- reference summary pick -------------------------------------------------

def test_reference_is_chronologically_first_ds():
    early = make_ds(11, 50, dt.datetime(2121, 6, 3, 10, 0), 100)
    late = make_ds(12, 50, dt.datetime(2121, 6, 3, 15, 0), 100)
    assert pick_reference_summary([late, early]).row_id == 11


def test_reference_missing_charttime_sorts_at_midnight():
    dated_only = NoteRow(row_id=13, hadm_id=50, chartdate=dt.date(2121, 6, 3), charttime=None,
                         category=NoteCategory.DS, raw_text="x")
    timed = make_ds(14, 50, dt.datetime(2121, 6, 3, 0, 5), 10)
    assert pick_reference_summary([timed, dated_only]).row_id == 13


# --- fixture cohort ---------------------------------------------------------

def fixture_cohort():
    notes = load("NOTEEVENTS.csv", TableKind.NOTEEVENTS)
    return select_cohort(fixture_index(), notes)


def test_fixture_cohort_membership():
    result = fixture_cohort()
    assert result.member_hadm_ids == {1001, 1002, 1007, 1008}
    reasons = {e.hadm_id: e.reason for e in result.exclusions}
    assert reasons == {1003: "age", 1004: "los", 1005: "ds_missing", 1006: "ds_length"}


def test_fixture_cohort_details():
    result = fixture_cohort()
    by_hadm = {m.hadm_id: m for m in result.members}
    assert by_hadm[1001].age.years == 81
    assert by_hadm[1007].age == AgeResult(90, clamped=True)
    # the addendum (row 9009) must not be chosen as the reference
    assert "HOSPITAL COURSE" in by_hadm[1001].reference.text
    assert by_hadm[1001].reference.row_id == 9008
    assert by_hadm[1001].reference_words <= 500


def test_cohort_is_order_independent():
    notes = load("NOTEEVENTS.csv", TableKind.NOTEEVENTS)
    base = fixture_cohort()
    rng = random.Random(7)
    for _ in range(3):
        shuffled = list(notes)
        rng.shuffle(shuffled)
        again = select_cohort(fixture_index(), shuffled)
        assert [m.hadm_id for m in again.members] == [m.hadm_id for m in base.members]
        assert [(e.hadm_id, e.reason) for e in again.exclusions] == \
               [(e.hadm_id, e.reason) for e in base.exclusions]


# --- vocabularies -----------------------------------------------------------

def test_fixture_vocabularies():
    result = fixture_cohort()
    rx = load("PRESCRIPTIONS.csv", TableKind.PRESCRIPTIONS)
    chart = load("CHARTEVENTS.csv", TableKind.CHARTEVENTS)
    vocab = build_vocabularies(result.members, rx, chart)

    assert vocab.drug_coverage["heparin sodium"] == 1.0
    assert "heparin sodium" in vocab.drugs
    assert "warfarin" in vocab.drugs          # single patient: 0.25 > 0.10

    assert vocab.item_coverage[211] == 1.0
    assert vocab.chart_items == {211, 791, 813, 814, 815, 828}
    # exactly at the 50% threshold: excluded by the strict comparison
    assert vocab.item_coverage[676] == 0.5
    assert 676 not in vocab.chart_items
    assert 618 not in vocab.chart_items


def test_strict_drug_threshold():
    result = fixture_cohort()
    rx = load("PRESCRIPTIONS.csv", TableKind.PRESCRIPTIONS)
    chart = load("CHARTEVENTS.csv", TableKind.CHARTEVENTS)
    # push the threshold to exactly one patient's share: 0.25 is not > 0.25
    vocab = build_vocabularies(result.members, rx, chart, drug_threshold=0.25)
    assert "warfarin" not in vocab.drugs
    assert "heparin sodium" in vocab.drugs


def test_empty_cohort_vocabulary_raises():
    with pytest.raises(ValidationError):
        build_vocabularies([], [], [])
