"""Chronological per-hospitalization sequential records.

A sequential record is a header (demographics, stay, coded events) plus a
time-ordered event stream between an admission marker and a discharge
marker. Three rendered input variants feed downstream training and
generation: structured rows only, note text only, or both. The boundary
markers appear in every variant; the discharge summary itself never appears
as an event.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, time
from typing import Iterable, Optional

from .cohort import CohortMember, Vocabularies, los_days, normalize_drug
from .ingest import ChartObservation, CodedEvent, NoteCategory, NoteRow, Prescription, cap_codes
from .notes import process_note

KIND_ADMISSION = "admission"
KIND_CHART = "chart"
KIND_MEDICATION = "medication"
KIND_NOTE = "note"
KIND_DISCHARGE = "discharge"

# tie-break order for events sharing a timestamp
KIND_RANK = {
    KIND_ADMISSION: 0,
    KIND_CHART: 1,
    KIND_MEDICATION: 2,
    KIND_NOTE: 3,
    KIND_DISCHARGE: 4,
}

INPUT_VARIANTS = ("table", "text", "both")

SECTION_TITLES = (
    "1. Patient information",
    "2. Diagnostic information and past history",
    "3. Surgery or procedure information",
    "4. Significant medication administration and discharge medication history",
    "5. Meaningful lab tests",
    "6. Summary of significant text records/notes",
    "7. Discharge outcomes and treatment plan",
    "8. Overall summary",
)

_INSTRUCTION_PREAMBLE = (
    "Below is the chronological record of a single hospitalization. Write its "
    "discharge summary, organized as these eight numbered sections:\n"
    + "\n".join(SECTION_TITLES)
    + "\nBase every statement on the record alone.\n"
)


@dataclass(frozen=True)
class TimelineEvent:
    ts: datetime
    kind: str
    text: str
    source_row: int = 0

    def sort_key(self) -> tuple:
        return (self.ts, KIND_RANK[self.kind], self.source_row)


@dataclass
class SequentialRecord:
    subject_id: int
    hadm_id: int
    header: str
    events: list[TimelineEvent]
    input_table: str
    input_text: str
    input_both: str
    instruction: str
    reference: str
    dropped_out_of_window: int = 0


def _fmt_value(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return f"{value:g}"


def _code_phrase(event: CodedEvent) -> str:
    if event.description:
        return f"{event.code} {event.description}"
    return event.code


def render_header(member: CohortMember, coded_events: Iterable[CodedEvent]) -> str:
    """Demographics, stay bounds, and capped coded events as header lines.

    Diagnosis V-codes (status/aftercare codes) get their own line instead of
    competing with disease codes for the five diagnosis slots.
    """
    admission = member.admission
    capped = cap_codes(coded_events, limit=5)
    mine = [e for e in capped if e.hadm_id == member.hadm_id]
    diagnoses = [e for e in mine if e.kind == "diagnosis" and not e.code.upper().startswith("V")]
    attention = [e for e in mine if e.kind == "diagnosis" and e.code.upper().startswith("V")]
    procedures = [e for e in mine if e.kind == "procedure"]

    lines = [
        f"Patient: {member.patient.gender}, age {member.age.years}, "
        f"born {member.patient.dob:%Y-%m-%d}",
        f"Admission: {admission.admittime:%Y-%m-%d %H:%M} to "
        f"{admission.dischtime:%Y-%m-%d %H:%M} ({los_days(admission):.2f} days), "
        f"type {admission.admission_type or 'UNKNOWN'}",
    ]
    if admission.admit_diagnosis:
        lines.append(f"Admitting diagnosis: {admission.admit_diagnosis}")
    if diagnoses:
        lines.append("Diagnoses: " + "; ".join(_code_phrase(e) for e in diagnoses))
    if attention:
        lines.append("Attention codes: " + "; ".join(_code_phrase(e) for e in attention))
    if procedures:
        lines.append("Procedures: " + "; ".join(_code_phrase(e) for e in procedures))
    return "\n".join(lines)


def _window_ts_for_date(day: date, admittime: datetime, dischtime: datetime) -> Optional[datetime]:
    # date-resolution sources (prescriptions, undated notes) are in-window
    # when their calendar day overlaps the stay; clamp to the admission
    # instant so admission-day entries are not lost to the midnight boundary
    if day < admittime.date() or day > dischtime.date():
        return None
    return max(datetime.combine(day, time.min), admittime)


def _medication_events(prescriptions: Iterable[Prescription], member: CohortMember,
                       vocab: Optional[Vocabularies]) -> tuple[list[TimelineEvent], int]:
    admission = member.admission
    dropped = 0
    grouped: dict[tuple[str, str, date], list[Prescription]] = {}
    for rx in prescriptions:
        if rx.hadm_id != member.hadm_id:
            continue
        if vocab is not None and normalize_drug(rx.drug) not in vocab.drugs:
            continue
        ts = _window_ts_for_date(rx.startdate, admission.admittime, admission.dischtime)
        if ts is None:
            dropped += 1
            continue
        grouped.setdefault((rx.drug, rx.route, rx.startdate), []).append(rx)

    events = []
    for (drug, route, day), rows in grouped.items():
        rows.sort(key=lambda r: r.row_id)
        first = rows[0]
        text = drug
        if first.dose:
            text += f" {first.dose}"
        if route:
            text += f" {route}"
        if len(rows) > 1:
            text += f" x{len(rows)}"
        ts = _window_ts_for_date(day, admission.admittime, admission.dischtime)
        events.append(TimelineEvent(ts=ts, kind=KIND_MEDICATION, text=text,
                                    source_row=first.row_id))
    return events, dropped


def _chart_events(observations: Iterable[ChartObservation], member: CohortMember,
                  vocab: Optional[Vocabularies]) -> tuple[list[TimelineEvent], int]:
    admission = member.admission
    events, dropped = [], 0
    for obs in observations:
        if obs.hadm_id != member.hadm_id:
            continue
        if vocab is not None and obs.item_id not in vocab.chart_items:
            continue
        if not admission.admittime <= obs.charttime <= admission.dischtime:
            dropped += 1
            continue
        label = obs.label or f"item {obs.item_id}"
        if obs.value_num is not None:
            text = f"{label}: {_fmt_value(obs.value_num)}"
            if obs.unit:
                text += f" {obs.unit}"
        else:
            text = label
        events.append(TimelineEvent(ts=obs.charttime, kind=KIND_CHART, text=text,
                                    source_row=obs.row_id))
    return events, dropped


def _note_events(notes: Iterable[NoteRow], member: CohortMember) -> tuple[list[TimelineEvent], int]:
    admission = member.admission
    events, dropped = [], 0
    for note in notes:
        if note.hadm_id != member.hadm_id or note.category is NoteCategory.DS:
            continue
        if note.charttime is not None:
            if not admission.admittime <= note.charttime <= admission.dischtime:
                dropped += 1
                continue
            ts = note.charttime
        else:
            ts = _window_ts_for_date(note.chartdate, admission.admittime, admission.dischtime)
            if ts is None:
                dropped += 1
                continue
        doc = process_note(note)
        events.append(TimelineEvent(ts=ts, kind=KIND_NOTE,
                                    text=f"[{note.category.value}] {doc.text}",
                                    source_row=note.row_id))
    return events, dropped


def _event_line(event: TimelineEvent) -> str:
    flattened = " ".join(event.text.split())
    return f"[{event.ts:%Y-%m-%d %H:%M}] {event.kind.upper()}: {flattened}"


def render_input(record: SequentialRecord, variant: str) -> str:
    """One input string: header lines then one line per selected event.

    "table" keeps chart and medication rows, "text" keeps notes, "both"
    keeps everything. Admission and discharge markers appear in all three.
    """
    if variant not in INPUT_VARIANTS:
        raise ValueError(f"unknown input variant: {variant!r}")
    keep = {
        "table": {KIND_ADMISSION, KIND_CHART, KIND_MEDICATION, KIND_DISCHARGE},
        "text": {KIND_ADMISSION, KIND_NOTE, KIND_DISCHARGE},
        "both": set(KIND_RANK),
    }[variant]
    lines = record.header.split("\n")
    lines.extend(_event_line(e) for e in record.events if e.kind in keep)
    return "\n".join(lines)


def render_instruction(record: SequentialRecord) -> str:
    """Generation prompt: section directive followed by the full input."""
    return _INSTRUCTION_PREAMBLE + "\n" + render_input(record, "both")


def build_timeline(member: CohortMember,
                   coded_events: Iterable[CodedEvent],
                   prescriptions: Iterable[Prescription],
                   chart_observations: Iterable[ChartObservation],
                   notes: Iterable[NoteRow],
                   vocabularies: Optional[Vocabularies] = None) -> SequentialRecord:
    """Assemble one member's sequential record.

    Inputs may span the whole export; rows for other admissions are ignored,
    vocabulary-filtered rows are silently skipped, and in-scope rows
    timestamped outside the stay are dropped and counted.
    """
    admission = member.admission
    med_events, med_dropped = _medication_events(prescriptions, member, vocabularies)
    chart_evts, chart_dropped = _chart_events(chart_observations, member, vocabularies)
    note_evts, note_dropped = _note_events(notes, member)

    marker_in = TimelineEvent(
        ts=admission.admittime, kind=KIND_ADMISSION,
        text=(f"admitted ({admission.admission_type or 'UNKNOWN'})"
              + (f" for {admission.admit_diagnosis}" if admission.admit_diagnosis else "")))
    marker_out = TimelineEvent(
        ts=admission.dischtime, kind=KIND_DISCHARGE,
        text=f"discharged after {los_days(admission):.2f} days")

    events = sorted([marker_in, *med_events, *chart_evts, *note_evts, marker_out],
                    key=TimelineEvent.sort_key)

    record = SequentialRecord(
        subject_id=member.subject_id,
        hadm_id=member.hadm_id,
        header=render_header(member, coded_events),
        events=events,
        input_table="", input_text="", input_both="", instruction="",
        reference=member.reference.text,
        dropped_out_of_window=med_dropped + chart_dropped + note_dropped,
    )
    record.input_table = render_input(record, "table")
    record.input_text = render_input(record, "text")
    record.input_both = render_input(record, "both")
    record.instruction = render_instruction(record)
    return record
