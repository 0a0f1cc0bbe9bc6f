"""Random admission generator + invariant checker shared by timeline tests."""

import datetime as dt
from collections import Counter

from note_forge.cohort import Vocabularies, normalize_drug, select_cohort
from note_forge.ingest import (
    Admission,
    ChartObservation,
    CodedEvent,
    NoteCategory,
    NoteRow,
    Patient,
    Prescription,
    build_admission_index,
)
from note_forge.timeline import (
    KIND_ADMISSION,
    KIND_CHART,
    KIND_DISCHARGE,
    KIND_MEDICATION,
    KIND_NOTE,
    SECTION_TITLES,
    build_timeline,
)

DRUG_POOL = ["Heparin Sodium", "Warfarin", "Metoprolol Tartrate", "Furosemide",
             "Insulin", "Vancomycin", "Morphine Sulfate", "Aspirin"]
ROUTE_POOL = ["IV", "PO", "SC"]
ITEM_POOL = [211, 618, 676, 791, 813, 814, 815, 828]
DX_POOL = ["42731", "4280", "486", "5849", "V551", "V4581", "25000", "41401"]
PROC_POOL = ["431", "9904", "3893"]
NOTE_CATEGORIES = [NoteCategory.NURSING_OTHER, NoteCategory.RADIOLOGY,
                   NoteCategory.ECG, NoteCategory.PHYSICIAN, NoteCategory.NURSING]


def make_random_case(rng, hadm_id=1):
    """One synthetic admission with in- and out-of-window rows everywhere."""
    admit = dt.datetime(2121, 1, 1) + dt.timedelta(days=rng.randrange(0, 365),
                                                   minutes=rng.randrange(0, 1440))
    disch = admit + dt.timedelta(hours=rng.uniform(20, 167))
    dob = admit - dt.timedelta(days=rng.randrange(19 * 366, 89 * 365))
    patient = Patient(subject_id=hadm_id, gender=rng.choice("MF"), dob=dob)
    admission = Admission(hadm_id=hadm_id, subject_id=hadm_id, admittime=admit,
                          dischtime=disch, admission_type="EMERGENCY",
                          admit_diagnosis=rng.choice(["SEPSIS", "GI BLEED", ""]))

    coded = [CodedEvent(hadm_id, seq + 1, rng.choice(DX_POOL), "diagnosis")
             for seq in range(rng.randrange(0, 9))]
    coded += [CodedEvent(hadm_id, seq + 1, rng.choice(PROC_POOL), "procedure")
              for seq in range(rng.randrange(0, 4))]

    stay_days = (disch.date() - admit.date()).days
    prescriptions = []
    for i in range(rng.randrange(0, 16)):
        start = admit.date() + dt.timedelta(days=rng.randrange(-2, stay_days + 3))
        prescriptions.append(Prescription(
            row_id=100 + i, hadm_id=hadm_id, drug=rng.choice(DRUG_POOL),
            startdate=start, enddate=start + dt.timedelta(days=rng.randrange(0, 3)),
            route=rng.choice(ROUTE_POOL), dose="10 mg"))

    window_minutes = int((disch - admit).total_seconds() // 60)
    chart = []
    for i in range(rng.randrange(0, 21)):
        offset = rng.randrange(-2000, window_minutes + 2000)
        chart.append(ChartObservation(
            row_id=300 + i, hadm_id=hadm_id, item_id=rng.choice(ITEM_POOL),
            charttime=admit + dt.timedelta(minutes=offset),
            value_num=round(rng.uniform(0.5, 200), 1), unit="u", label="Item"))

    notes = []
    for i in range(rng.randrange(0, 7)):
        if rng.random() < 0.3:
            day = admit.date() + dt.timedelta(days=rng.randrange(-2, stay_days + 3))
            when, on = None, day
        else:
            offset = rng.randrange(-2000, window_minutes + 2000)
            when = admit + dt.timedelta(minutes=offset)
            on = when.date()
        notes.append(NoteRow(row_id=500 + i, hadm_id=hadm_id, chartdate=on,
                             charttime=when, category=rng.choice(NOTE_CATEGORIES),
                             raw_text=f"note body {i} [**Hospital {i}**] stable ----"))
    notes.append(NoteRow(row_id=900, hadm_id=hadm_id, chartdate=disch.date(),
                         charttime=disch - dt.timedelta(minutes=30),
                         category=NoteCategory.DS,
                         raw_text=" ".join(f"w{k}" for k in range(rng.randrange(20, 120)))))

    vocab = Vocabularies(
        drugs={normalize_drug(d) for d in DRUG_POOL if rng.random() < 0.7},
        chart_items={i for i in ITEM_POOL if rng.random() < 0.7},
        drug_coverage={}, item_coverage={})

    index = build_admission_index([patient], [admission])
    cohort = select_cohort(index, notes)
    assert len(cohort.members) == 1, cohort.exclusions
    return cohort.members[0], coded, prescriptions, chart, notes, vocab


def event_lines(text, header):
    return text.split("\n")[len(header.split("\n")):]


def assert_record_invariants(record):
    """Every structural guarantee a sequential record makes."""
    keys = [e.sort_key() for e in record.events]
    assert keys == sorted(keys), "events not in chronological order"

    kinds = [e.kind for e in record.events]
    assert kinds[0] == KIND_ADMISSION and kinds[-1] == KIND_DISCHARGE
    assert kinds.count(KIND_ADMISSION) == 1 and kinds.count(KIND_DISCHARGE) == 1

    admit, disch = record.events[0].ts, record.events[-1].ts
    for event in record.events:
        assert admit <= event.ts <= disch, f"event outside stay: {event}"
        assert not event.text.startswith("[DS]"), "discharge summary leaked into events"

    header_lines = len(record.header.split("\n"))
    both = event_lines(record.input_both, record.header)
    table = event_lines(record.input_table, record.header)
    text = event_lines(record.input_text, record.header)
    assert len(both) == len(record.events)
    assert len(table) == sum(k in (KIND_ADMISSION, KIND_CHART, KIND_MEDICATION, KIND_DISCHARGE)
                             for k in kinds)
    assert len(text) == sum(k in (KIND_ADMISSION, KIND_NOTE, KIND_DISCHARGE) for k in kinds)
    assert len(record.input_both.split("\n")) == header_lines + len(record.events)

    # the combined variant is exactly the elementwise max of the other two
    assert Counter(table) | Counter(text) == Counter(both)
    for line in both:
        assert "\n" not in line

    assert record.instruction.endswith(record.input_both)
    for title in SECTION_TITLES:
        assert title in record.instruction


def build_fuzzed(rng, hadm_id=1):
    member, coded, rx, chart, notes, vocab = make_random_case(rng, hadm_id)
    return build_timeline(member, coded, rx, chart, notes, vocab)
