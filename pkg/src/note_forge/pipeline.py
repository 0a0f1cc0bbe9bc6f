"""End-to-end assembly from a directory of EMR CSV exports to records.

The CLI and the demo service both go through run_pipeline so that a
given data directory always yields the same cohort and the same
sequential records.
"""

from __future__ import annotations

import importlib.resources
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .cohort import CohortResult, Vocabularies, build_vocabularies, select_cohort
from .ingest import (
    AdmissionIndex,
    DictionaryKind,
    TABLE_FILENAMES,
    TableKind,
    attach_descriptions,
    attach_item_labels,
    build_admission_index,
    load_dictionary,
    parse_table,
)
from .timeline import SequentialRecord, build_timeline

logger = logging.getLogger(__name__)

# the pipeline cannot run without these three
REQUIRED_TABLES = (TableKind.PATIENTS, TableKind.ADMISSIONS, TableKind.NOTEEVENTS)

_DICTIONARY_FILES = {
    DictionaryKind.ICD_DIAGNOSES: "D_ICD_DIAGNOSES.csv",
    DictionaryKind.ICD_PROCEDURES: "D_ICD_PROCEDURES.csv",
    DictionaryKind.ITEMS: "D_ITEMS.csv",
    DictionaryKind.LABITEMS: "D_LABITEMS.csv",
}


def fixtures_dir() -> Path:
    """Directory of the synthetic EMR export shipped with the package."""
    return Path(str(importlib.resources.files("note_forge"))) / "fixtures" / "emr"


@dataclass
class PipelineResult:
    index: AdmissionIndex
    cohort: CohortResult
    vocabularies: Vocabularies
    records: list  # SequentialRecord, ordered by hadm_id
    rejects: list = field(default_factory=list)
    table_counts: dict = field(default_factory=dict)

    def record_for_hadm(self, hadm_id: int) -> SequentialRecord:
        for record in self.records:
            if record.hadm_id == hadm_id:
                return record
        raise KeyError(hadm_id)


def _parse_optional(data_dir: Path, kind: TableKind, rejects: list,
                    counts: dict) -> list:
    path = data_dir / TABLE_FILENAMES[kind]
    if not path.exists():
        if kind in REQUIRED_TABLES:
            raise FileNotFoundError(f"required table missing: {path}")
        logger.info("optional table %s not present, skipping", path.name)
        return []
    result = parse_table(path, kind)
    rejects.extend(result.rejects)
    counts[path.name] = {"accepted": len(result.records),
                         "rejected": len(result.rejects)}
    return result.records


def _load_optional_dictionary(data_dir: Path, kind: DictionaryKind) -> dict:
    path = data_dir / _DICTIONARY_FILES[kind]
    if not path.exists():
        return {}
    return load_dictionary(path, kind)


def ingest_tables(data_dir) -> tuple:
    """Parse every table file present; returns (per-file counts, rejects)."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise FileNotFoundError(f"data directory not found: {data_dir}")
    rejects: list = []
    counts: dict = {}
    for kind in TableKind:
        _parse_optional(data_dir, kind, rejects, counts)
    return counts, rejects


def run_pipeline(data_dir, *, min_age: int = 19, max_los_days: float = 7.0,
                 max_summary_words: int = 500, drug_threshold: float = 0.10,
                 item_threshold: float = 0.50) -> PipelineResult:
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise FileNotFoundError(f"data directory not found: {data_dir}")

    rejects: list = []
    counts: dict = {}
    load = lambda kind: _parse_optional(data_dir, kind, rejects, counts)

    patients = load(TableKind.PATIENTS)
    admissions = load(TableKind.ADMISSIONS)
    notes = load(TableKind.NOTEEVENTS)
    prescriptions = load(TableKind.PRESCRIPTIONS)
    chart = load(TableKind.CHARTEVENTS)
    load(TableKind.LABEVENTS)  # parsed for reject accounting only
    diagnoses = load(TableKind.DIAGNOSES_ICD)
    procedures = load(TableKind.PROCEDURES_ICD)

    chart = attach_item_labels(
        chart, _load_optional_dictionary(data_dir, DictionaryKind.ITEMS))
    coded = attach_descriptions(
        diagnoses + procedures,
        _load_optional_dictionary(data_dir, DictionaryKind.ICD_DIAGNOSES),
        _load_optional_dictionary(data_dir, DictionaryKind.ICD_PROCEDURES))

    index = build_admission_index(patients, admissions)
    rejects.extend(index.issues)
    cohort = select_cohort(index, notes, min_age=min_age,
                           max_los_days=max_los_days,
                           max_summary_words=max_summary_words)
    vocabularies = build_vocabularies(cohort.members, prescriptions, chart,
                                      drug_threshold=drug_threshold,
                                      item_threshold=item_threshold)
    records = [build_timeline(member, coded, prescriptions, chart, notes,
                              vocabularies)
               for member in sorted(cohort.members, key=lambda m: m.hadm_id)]
    logger.info("pipeline: %d admissions in, %d cohort records out",
                len(index), len(records))
    return PipelineResult(index=index, cohort=cohort,
                          vocabularies=vocabularies, records=records,
                          rejects=rejects, table_counts=counts)
