"""Hospitalization cohort selection and cohort-scoped vocabularies.

An admission enters the cohort when the patient is an adult (19 or older),
the stay is shorter than seven days, and it has a discharge summary whose
cleaned text fits in 500 words. Rules are checked in that fixed order and an
excluded admission reports only the first rule it failed, so exclusion
counts are stable across input orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, time
from typing import Iterable, Optional

from .errors import ValidationError
from .ingest import (
    AdmissionIndex,
    Admission,
    ChartObservation,
    NoteCategory,
    NoteRow,
    Patient,
    Prescription,
)
from .notes import NoteDocument, process_note, word_count

DAYS_PER_YEAR = 365.25
# dob values shifted far into the past mark patients de-identified as very
# old; they are reported as 90 rather than their literal difference
AGE_CLAMP_TRIGGER = 120
AGE_CLAMP_VALUE = 90

EXCLUSION_ORDER = ("age", "los", "ds_missing", "ds_length")


@dataclass(frozen=True)
class AgeResult:
    years: int
    clamped: bool = False


def compute_age(dob: datetime, admittime: datetime) -> AgeResult:
    """Age in whole years at admission, floor((admit - dob) / 365.25 days).

    Ages above 120 are artifacts of date-shift de-identification and clamp
    to 90, flagged. An admission before birth raises ValidationError.
    """
    if admittime < dob:
        raise ValidationError(
            f"admission at {admittime} predates date of birth {dob}")
    delta_days = (admittime - dob).days
    years = int(delta_days / DAYS_PER_YEAR)
    if years > AGE_CLAMP_TRIGGER:
        return AgeResult(AGE_CLAMP_VALUE, clamped=True)
    return AgeResult(years)


def los_days(admission: Admission) -> float:
    return (admission.dischtime - admission.admittime).total_seconds() / 86400.0


def _note_order(note: NoteRow) -> tuple:
    effective = note.charttime or datetime.combine(note.chartdate, time.min)
    return (note.chartdate, effective, note.row_id)


def pick_reference_summary(notes: Iterable[NoteRow]) -> Optional[NoteRow]:
    """Chronologically first discharge summary, or None.

    Ordered by (chartdate, charttime, row_id); a missing charttime sorts at
    midnight. Addenda filed later therefore never displace the original.
    """
    candidates = [n for n in notes if n.category is NoteCategory.DS]
    if not candidates:
        return None
    return min(candidates, key=_note_order)


@dataclass(frozen=True)
class CohortMember:
    subject_id: int
    hadm_id: int
    patient: Patient
    admission: Admission
    age: AgeResult
    reference: NoteDocument
    reference_words: int


@dataclass(frozen=True)
class Exclusion:
    hadm_id: int
    subject_id: int
    reason: str    # one of EXCLUSION_ORDER
    detail: str


@dataclass
class CohortResult:
    members: list[CohortMember]
    exclusions: list[Exclusion]

    @property
    def member_hadm_ids(self) -> set[int]:
        return {m.hadm_id for m in self.members}


def select_cohort(index: AdmissionIndex, notes: Iterable[NoteRow], *,
                  min_age: int = 19,
                  max_los_days: float = 7.0,
                  max_summary_words: int = 500) -> CohortResult:
    """Partition every indexed admission into members and exclusions."""
    notes_by_hadm: dict[int, list[NoteRow]] = {}
    for note in notes:
        if note.hadm_id is not None:
            notes_by_hadm.setdefault(note.hadm_id, []).append(note)

    members: list[CohortMember] = []
    exclusions: list[Exclusion] = []
    for hadm_id in sorted(index):
        patient, admission = index[hadm_id]
        age = compute_age(patient.dob, admission.admittime)
        if age.years < min_age:
            exclusions.append(Exclusion(hadm_id, patient.subject_id, "age",
                                        f"age {age.years} under {min_age}"))
            continue
        stay = los_days(admission)
        if not stay < max_los_days:
            exclusions.append(Exclusion(hadm_id, patient.subject_id, "los",
                                        f"stay of {stay:.2f} days not under {max_los_days}"))
            continue
        reference_row = pick_reference_summary(notes_by_hadm.get(hadm_id, ()))
        if reference_row is None:
            exclusions.append(Exclusion(hadm_id, patient.subject_id, "ds_missing",
                                        "no discharge summary"))
            continue
        reference = process_note(reference_row)
        words = word_count(reference.text)
        if words > max_summary_words:
            exclusions.append(Exclusion(hadm_id, patient.subject_id, "ds_length",
                                        f"discharge summary has {words} words, over {max_summary_words}"))
            continue
        members.append(CohortMember(
            subject_id=patient.subject_id,
            hadm_id=hadm_id,
            patient=patient,
            admission=admission,
            age=age,
            reference=reference,
            reference_words=words,
        ))
    return CohortResult(members=members, exclusions=exclusions)


def normalize_drug(name: str) -> str:
    return " ".join(name.split()).casefold()


@dataclass
class Vocabularies:
    """Cohort-frequency-filtered drug names and chart item ids."""

    drugs: set[str]
    chart_items: set[int]
    drug_coverage: dict[str, float]
    item_coverage: dict[int, float]


def build_vocabularies(members: Iterable[CohortMember],
                       prescriptions: Iterable[Prescription],
                       chart_observations: Iterable[ChartObservation], *,
                       drug_threshold: float = 0.10,
                       item_threshold: float = 0.50) -> Vocabularies:
    """Keep drugs and chart items shared by enough of the cohort.

    Coverage is the fraction of distinct cohort patients with at least one
    occurrence; retention requires coverage strictly above the threshold.
    """
    members = list(members)
    if not members:
        raise ValidationError("cannot build vocabularies for an empty cohort")
    subject_by_hadm = {m.hadm_id: m.subject_id for m in members}
    population = len({m.subject_id for m in members})

    drug_subjects: dict[str, set[int]] = {}
    for rx in prescriptions:
        subject = subject_by_hadm.get(rx.hadm_id)
        if subject is None:
            continue
        drug_subjects.setdefault(normalize_drug(rx.drug), set()).add(subject)

    item_subjects: dict[int, set[int]] = {}
    for obs in chart_observations:
        subject = subject_by_hadm.get(obs.hadm_id)
        if subject is None:
            continue
        item_subjects.setdefault(obs.item_id, set()).add(subject)

    drug_coverage = {drug: len(subs) / population for drug, subs in drug_subjects.items()}
    item_coverage = {item: len(subs) / population for item, subs in item_subjects.items()}
    return Vocabularies(
        drugs={d for d, c in drug_coverage.items() if c > drug_threshold},
        chart_items={i for i, c in item_coverage.items() if c > item_threshold},
        drug_coverage=drug_coverage,
        item_coverage=item_coverage,
    )
