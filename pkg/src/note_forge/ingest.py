"""Parse MIMIC-III-shaped CSV exports into typed records.

Each supported table has a declared column schema (public MIMIC-III v1.4
layout). Malformed rows are never dropped silently: they are collected into a
rejects report alongside the parsed records. Files are independent, so callers
may parse tables in parallel; all returned collections are plain immutable
records.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import math
from dataclasses import dataclass, field, fields as dc_fields
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import SchemaError, ValidationError

log = logging.getLogger(__name__)

TIMESTAMP_FMT = "%Y-%m-%d %H:%M:%S"
DATE_FMT = "%Y-%m-%d"


class TableKind(str, enum.Enum):
    PATIENTS = "patients"
    ADMISSIONS = "admissions"
    DIAGNOSES_ICD = "diagnoses_icd"
    PROCEDURES_ICD = "procedures_icd"
    PRESCRIPTIONS = "prescriptions"
    CHARTEVENTS = "chartevents"
    LABEVENTS = "labevents"
    NOTEEVENTS = "noteevents"
    D_ICD_DIAGNOSES = "d_icd_diagnoses"
    D_ICD_PROCEDURES = "d_icd_procedures"
    D_ITEMS = "d_items"
    D_LABITEMS = "d_labitems"


class DictionaryKind(str, enum.Enum):
    ICD_DIAGNOSES = "icd_diagnoses"
    ICD_PROCEDURES = "icd_procedures"
    ITEMS = "items"
    LABITEMS = "labitems"


class NoteCategory(enum.Enum):
    NURSING_OTHER = "Nursing/other"
    RADIOLOGY = "Radiology"
    NURSING = "Nursing"
    ECG = "ECG"
    PHYSICIAN = "Physician"
    DS = "DS"
    ECHO = "Echo"
    RESPIRATORY = "Respiratory"
    NUTRITION = "Nutrition"
    GENERAL = "General"
    REHAB_SERVICES = "Rehab Services"
    SOCIAL_WORK = "Social Work"
    CASE_MANAGEMENT = "Case Management"
    PHARMACY = "Pharmacy"
    CONSULT = "Consult"

    @classmethod
    def parse(cls, raw: str) -> "NoteCategory":
        """Case-insensitive, whitespace-trimmed category lookup.

        Accepts the category strings used in NOTEEVENTS exports, including the
        long form "Discharge summary" for DS. Unknown categories raise
        ValidationError.
        """
        key = " ".join(raw.split()).casefold()
        try:
            return _CATEGORY_ALIASES[key]
        except KeyError:
            raise ValidationError(f"unknown note category: {raw!r}") from None


_CATEGORY_ALIASES: dict[str, NoteCategory] = {
    member.value.casefold(): member for member in NoteCategory
}
_CATEGORY_ALIASES["discharge summary"] = NoteCategory.DS


@dataclass(frozen=True)
class Patient:
    subject_id: int
    gender: str  # "M" or "F"
    dob: datetime
    dod: Optional[datetime] = None


@dataclass(frozen=True)
class Admission:
    hadm_id: int
    subject_id: int
    admittime: datetime
    dischtime: datetime
    admission_type: str
    admit_diagnosis: str


@dataclass(frozen=True)
class CodedEvent:
    hadm_id: int
    seq_num: int
    code: str
    kind: str  # "diagnosis" or "procedure"
    description: Optional[str] = None


@dataclass(frozen=True)
class Prescription:
    row_id: int
    hadm_id: int
    drug: str
    startdate: date
    enddate: date
    route: str
    dose: str


@dataclass(frozen=True)
class ChartObservation:
    row_id: int
    hadm_id: int
    item_id: int
    charttime: datetime
    value_num: Optional[float]
    unit: Optional[str]
    label: str = ""


@dataclass(frozen=True)
class LabObservation:
    row_id: int
    hadm_id: Optional[int]
    item_id: int
    charttime: datetime
    value_num: Optional[float]
    unit: Optional[str]


@dataclass(frozen=True)
class NoteRow:
    row_id: int
    hadm_id: Optional[int]
    chartdate: date
    charttime: Optional[datetime]
    category: NoteCategory
    raw_text: str


@dataclass(frozen=True)
class RejectRow:
    file: str
    row: int
    reason: str

    def to_json(self) -> dict:
        return {"file": self.file, "row": self.row, "reason": self.reason}


@dataclass
class ParseResult:
    records: list
    rejects: list[RejectRow] = field(default_factory=list)


class _RowError(Exception):
    pass


def _req(raw: dict[str, str], col: str) -> str:
    value = raw.get(col, "").strip()
    if not value:
        raise _RowError(f"missing value for {col}")
    return value


def _opt(raw: dict[str, str], col: str) -> Optional[str]:
    value = raw.get(col, "").strip()
    return value or None


def _parse_int(text: str, col: str) -> int:
    try:
        return int(float(text)) if "." in text else int(text)
    except ValueError:
        raise _RowError(f"{col}: not an integer: {text!r}") from None


def _parse_ts(text: str, col: str) -> datetime:
    try:
        return datetime.strptime(text, TIMESTAMP_FMT)
    except ValueError:
        raise _RowError(f"{col}: not a timestamp (YYYY-MM-DD HH:MM:SS): {text!r}") from None


def _parse_date(text: str, col: str) -> date:
    try:
        return datetime.strptime(text, DATE_FMT).date()
    except ValueError:
        raise _RowError(f"{col}: not a date (YYYY-MM-DD): {text!r}") from None


def _parse_float(text: str, col: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise _RowError(f"{col}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise _RowError(f"{col}: non-finite value: {text!r}")
    return value


def _fmt_ts(value: Optional[datetime]) -> str:
    return value.strftime(TIMESTAMP_FMT) if value else ""


def _fmt_date(value: Optional[date]) -> str:
    return value.strftime(DATE_FMT) if value else ""


def _fmt_num(value: Optional[float]) -> str:
    return "" if value is None else repr(value)


# --- per-table row handling -------------------------------------------------

def _parse_patient(raw: dict[str, str]) -> Patient:
    gender = _req(raw, "GENDER").upper()
    if gender not in ("M", "F"):
        raise _RowError(f"GENDER: expected M or F, got {gender!r}")
    dob = _parse_ts(_req(raw, "DOB"), "DOB")
    dod_text = _opt(raw, "DOD")
    dod = _parse_ts(dod_text, "DOD") if dod_text else None
    if dod is not None and dob > dod:
        raise _RowError("DOB after DOD")
    return Patient(
        subject_id=_parse_int(_req(raw, "SUBJECT_ID"), "SUBJECT_ID"),
        gender=gender,
        dob=dob,
        dod=dod,
    )


def _unparse_patient(rec: Patient, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(row_id),
        "SUBJECT_ID": str(rec.subject_id),
        "GENDER": rec.gender,
        "DOB": _fmt_ts(rec.dob),
        "DOD": _fmt_ts(rec.dod),
    }


def _parse_admission(raw: dict[str, str]) -> Admission:
    admittime = _parse_ts(_req(raw, "ADMITTIME"), "ADMITTIME")
    dischtime = _parse_ts(_req(raw, "DISCHTIME"), "DISCHTIME")
    if not admittime < dischtime:
        raise _RowError("ADMITTIME not before DISCHTIME")
    return Admission(
        hadm_id=_parse_int(_req(raw, "HADM_ID"), "HADM_ID"),
        subject_id=_parse_int(_req(raw, "SUBJECT_ID"), "SUBJECT_ID"),
        admittime=admittime,
        dischtime=dischtime,
        admission_type=_opt(raw, "ADMISSION_TYPE") or "",
        admit_diagnosis=_opt(raw, "DIAGNOSIS") or "",
    )


def _unparse_admission(rec: Admission, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(row_id),
        "SUBJECT_ID": str(rec.subject_id),
        "HADM_ID": str(rec.hadm_id),
        "ADMITTIME": _fmt_ts(rec.admittime),
        "DISCHTIME": _fmt_ts(rec.dischtime),
        "ADMISSION_TYPE": rec.admission_type,
        "DIAGNOSIS": rec.admit_diagnosis,
    }


def _make_coded_parser(kind: str) -> Callable[[dict[str, str]], CodedEvent]:
    def _parse(raw: dict[str, str]) -> CodedEvent:
        seq = _parse_int(_req(raw, "SEQ_NUM"), "SEQ_NUM")
        if seq < 1:
            raise _RowError(f"SEQ_NUM: must be >= 1, got {seq}")
        return CodedEvent(
            hadm_id=_parse_int(_req(raw, "HADM_ID"), "HADM_ID"),
            seq_num=seq,
            code=_req(raw, "ICD9_CODE"),
            kind=kind,
        )

    return _parse


def _unparse_coded(rec: CodedEvent, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(row_id),
        "HADM_ID": str(rec.hadm_id),
        "SEQ_NUM": str(rec.seq_num),
        "ICD9_CODE": rec.code,
    }


def _parse_prescription(raw: dict[str, str]) -> Prescription:
    startdate = _parse_date(_req(raw, "STARTDATE")[:10], "STARTDATE")
    enddate_text = _opt(raw, "ENDDATE")
    enddate = _parse_date(enddate_text[:10], "ENDDATE") if enddate_text else startdate
    if startdate > enddate:
        raise _RowError("STARTDATE after ENDDATE")
    drug = " ".join(_req(raw, "DRUG").split())
    return Prescription(
        row_id=_parse_int(_req(raw, "ROW_ID"), "ROW_ID"),
        hadm_id=_parse_int(_req(raw, "HADM_ID"), "HADM_ID"),
        drug=drug,
        startdate=startdate,
        enddate=enddate,
        route=_opt(raw, "ROUTE") or "",
        dose=" ".join(
            part for part in (_opt(raw, "DOSE_VAL_RX"), _opt(raw, "DOSE_UNIT_RX")) if part
        ),
    )


def _unparse_prescription(rec: Prescription, row_id: int) -> dict[str, str]:
    dose_val, _, dose_unit = rec.dose.partition(" ")
    return {
        "ROW_ID": str(rec.row_id),
        "HADM_ID": str(rec.hadm_id),
        "STARTDATE": _fmt_date(rec.startdate),
        "ENDDATE": _fmt_date(rec.enddate),
        "DRUG": rec.drug,
        "DOSE_VAL_RX": dose_val,
        "DOSE_UNIT_RX": dose_unit,
        "ROUTE": rec.route,
    }


def _parse_chart(raw: dict[str, str]) -> ChartObservation:
    value_text = _opt(raw, "VALUENUM")
    return ChartObservation(
        row_id=_parse_int(_req(raw, "ROW_ID"), "ROW_ID"),
        hadm_id=_parse_int(_req(raw, "HADM_ID"), "HADM_ID"),
        item_id=_parse_int(_req(raw, "ITEMID"), "ITEMID"),
        charttime=_parse_ts(_req(raw, "CHARTTIME"), "CHARTTIME"),
        value_num=_parse_float(value_text, "VALUENUM") if value_text else None,
        unit=_opt(raw, "VALUEUOM"),
    )


def _unparse_chart(rec: ChartObservation, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(rec.row_id),
        "HADM_ID": str(rec.hadm_id),
        "ITEMID": str(rec.item_id),
        "CHARTTIME": _fmt_ts(rec.charttime),
        "VALUENUM": _fmt_num(rec.value_num),
        "VALUEUOM": rec.unit or "",
    }


def _parse_lab(raw: dict[str, str]) -> LabObservation:
    hadm_text = _opt(raw, "HADM_ID")
    value_text = _opt(raw, "VALUENUM")
    return LabObservation(
        row_id=_parse_int(_req(raw, "ROW_ID"), "ROW_ID"),
        hadm_id=_parse_int(hadm_text, "HADM_ID") if hadm_text else None,
        item_id=_parse_int(_req(raw, "ITEMID"), "ITEMID"),
        charttime=_parse_ts(_req(raw, "CHARTTIME"), "CHARTTIME"),
        value_num=_parse_float(value_text, "VALUENUM") if value_text else None,
        unit=_opt(raw, "VALUEUOM"),
    )


def _unparse_lab(rec: LabObservation, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(rec.row_id),
        "HADM_ID": "" if rec.hadm_id is None else str(rec.hadm_id),
        "ITEMID": str(rec.item_id),
        "CHARTTIME": _fmt_ts(rec.charttime),
        "VALUENUM": _fmt_num(rec.value_num),
        "VALUEUOM": rec.unit or "",
    }


def _parse_note(raw: dict[str, str]) -> NoteRow:
    hadm_text = _opt(raw, "HADM_ID")
    charttime_text = _opt(raw, "CHARTTIME")
    try:
        category = NoteCategory.parse(_req(raw, "CATEGORY"))
    except ValidationError as exc:
        raise _RowError(str(exc)) from None
    return NoteRow(
        row_id=_parse_int(_req(raw, "ROW_ID"), "ROW_ID"),
        hadm_id=_parse_int(hadm_text, "HADM_ID") if hadm_text else None,
        chartdate=_parse_date(_req(raw, "CHARTDATE")[:10], "CHARTDATE"),
        charttime=_parse_ts(charttime_text, "CHARTTIME") if charttime_text else None,
        category=category,
        raw_text=raw.get("TEXT", ""),
    )


def _unparse_note(rec: NoteRow, row_id: int) -> dict[str, str]:
    return {
        "ROW_ID": str(rec.row_id),
        "HADM_ID": "" if rec.hadm_id is None else str(rec.hadm_id),
        "CHARTDATE": _fmt_date(rec.chartdate),
        "CHARTTIME": _fmt_ts(rec.charttime),
        "CATEGORY": rec.category.value,
        "TEXT": rec.raw_text,
    }


@dataclass(frozen=True)
class TableSchema:
    kind: TableKind
    columns: tuple[str, ...]
    parse_row: Callable[[dict[str, str]], object]
    unparse_row: Callable[[object, int], dict[str, str]]
    unique_key: Optional[str] = None  # record attribute that must be unique per load


SCHEMAS: dict[TableKind, TableSchema] = {
    TableKind.PATIENTS: TableSchema(
        TableKind.PATIENTS,
        ("ROW_ID", "SUBJECT_ID", "GENDER", "DOB", "DOD"),
        _parse_patient,
        _unparse_patient,
        unique_key="subject_id",
    ),
    TableKind.ADMISSIONS: TableSchema(
        TableKind.ADMISSIONS,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "ADMITTIME", "DISCHTIME", "ADMISSION_TYPE", "DIAGNOSIS"),
        _parse_admission,
        _unparse_admission,
        unique_key="hadm_id",
    ),
    TableKind.DIAGNOSES_ICD: TableSchema(
        TableKind.DIAGNOSES_ICD,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "SEQ_NUM", "ICD9_CODE"),
        _make_coded_parser("diagnosis"),
        _unparse_coded,
    ),
    TableKind.PROCEDURES_ICD: TableSchema(
        TableKind.PROCEDURES_ICD,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "SEQ_NUM", "ICD9_CODE"),
        _make_coded_parser("procedure"),
        _unparse_coded,
    ),
    TableKind.PRESCRIPTIONS: TableSchema(
        TableKind.PRESCRIPTIONS,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "STARTDATE", "ENDDATE", "DRUG",
         "DOSE_VAL_RX", "DOSE_UNIT_RX", "ROUTE"),
        _parse_prescription,
        _unparse_prescription,
    ),
    TableKind.CHARTEVENTS: TableSchema(
        TableKind.CHARTEVENTS,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "ITEMID", "CHARTTIME", "VALUE",
         "VALUENUM", "VALUEUOM"),
        _parse_chart,
        _unparse_chart,
    ),
    TableKind.LABEVENTS: TableSchema(
        TableKind.LABEVENTS,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "ITEMID", "CHARTTIME", "VALUE",
         "VALUENUM", "VALUEUOM"),
        _parse_lab,
        _unparse_lab,
    ),
    TableKind.NOTEEVENTS: TableSchema(
        TableKind.NOTEEVENTS,
        ("ROW_ID", "SUBJECT_ID", "HADM_ID", "CHARTDATE", "CHARTTIME", "CATEGORY",
         "DESCRIPTION", "TEXT"),
        _parse_note,
        _unparse_note,
    ),
    TableKind.D_ICD_DIAGNOSES: TableSchema(
        TableKind.D_ICD_DIAGNOSES,
        ("ROW_ID", "ICD9_CODE", "SHORT_TITLE", "LONG_TITLE"),
        lambda raw: (_req(raw, "ICD9_CODE"), _opt(raw, "LONG_TITLE") or _opt(raw, "SHORT_TITLE") or ""),
        lambda rec, row_id: {"ROW_ID": str(row_id), "ICD9_CODE": rec[0], "LONG_TITLE": rec[1]},
    ),
    TableKind.D_ICD_PROCEDURES: TableSchema(
        TableKind.D_ICD_PROCEDURES,
        ("ROW_ID", "ICD9_CODE", "SHORT_TITLE", "LONG_TITLE"),
        lambda raw: (_req(raw, "ICD9_CODE"), _opt(raw, "LONG_TITLE") or _opt(raw, "SHORT_TITLE") or ""),
        lambda rec, row_id: {"ROW_ID": str(row_id), "ICD9_CODE": rec[0], "LONG_TITLE": rec[1]},
    ),
    TableKind.D_ITEMS: TableSchema(
        TableKind.D_ITEMS,
        ("ROW_ID", "ITEMID", "LABEL"),
        lambda raw: (_parse_int(_req(raw, "ITEMID"), "ITEMID"), _opt(raw, "LABEL") or ""),
        lambda rec, row_id: {"ROW_ID": str(row_id), "ITEMID": str(rec[0]), "LABEL": rec[1]},
    ),
    TableKind.D_LABITEMS: TableSchema(
        TableKind.D_LABITEMS,
        ("ROW_ID", "ITEMID", "LABEL"),
        lambda raw: (_parse_int(_req(raw, "ITEMID"), "ITEMID"), _opt(raw, "LABEL") or ""),
        lambda rec, row_id: {"ROW_ID": str(row_id), "ITEMID": str(rec[0]), "LABEL": rec[1]},
    ),
}

# Conventional export file name per table.
TABLE_FILENAMES: dict[TableKind, str] = {
    TableKind.PATIENTS: "PATIENTS.csv",
    TableKind.ADMISSIONS: "ADMISSIONS.csv",
    TableKind.DIAGNOSES_ICD: "DIAGNOSES_ICD.csv",
    TableKind.PROCEDURES_ICD: "PROCEDURES_ICD.csv",
    TableKind.PRESCRIPTIONS: "PRESCRIPTIONS.csv",
    TableKind.CHARTEVENTS: "CHARTEVENTS.csv",
    TableKind.LABEVENTS: "LABEVENTS.csv",
    TableKind.NOTEEVENTS: "NOTEEVENTS.csv",
    TableKind.D_ICD_DIAGNOSES: "D_ICD_DIAGNOSES.csv",
    TableKind.D_ICD_PROCEDURES: "D_ICD_PROCEDURES.csv",
    TableKind.D_ITEMS: "D_ITEMS.csv",
    TableKind.D_LABITEMS: "D_LABITEMS.csv",
}


def parse_table(path: str | Path, table_kind: TableKind | str) -> ParseResult:
    """Parse one CSV export into typed records plus a rejects list.

    Raises FileNotFoundError for a missing file and SchemaError when the
    header is missing declared columns. Row-level problems (bad types, enum
    violations, duplicate keys) become RejectRow entries, one per data row,
    so that len(records) + len(rejects) equals the file's data-row count.
    """
    kind = TableKind(table_kind)
    schema = SCHEMAS[kind]
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such table file: {path}")

    records: list = []
    rejects: list[RejectRow] = []
    seen_keys: set = set()

    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty file, expected a header row") from None
        header = [col.strip().upper() for col in header]
        missing = [col for col in schema.columns if col not in header]
        if missing:
            raise SchemaError(f"{path.name}: header missing column(s): {', '.join(missing)}")
        positions = {col: header.index(col) for col in schema.columns}

        for row_num, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                rejects.append(RejectRow(
                    path.name, row_num,
                    f"expected {len(header)} fields, got {len(row)}"))
                continue
            raw = {col: row[idx] for col, idx in positions.items()}
            try:
                record = schema.parse_row(raw)
            except _RowError as exc:
                rejects.append(RejectRow(path.name, row_num, str(exc)))
                continue
            if schema.unique_key is not None:
                key = getattr(record, schema.unique_key)
                if key in seen_keys:
                    rejects.append(RejectRow(
                        path.name, row_num,
                        f"duplicate {schema.unique_key}: {key}"))
                    continue
                seen_keys.add(key)
            records.append(record)

    return ParseResult(records=records, rejects=rejects)


def write_table(records: Iterable, table_kind: TableKind | str, path: str | Path) -> None:
    """Serialize typed records back to a CSV with the table's declared columns.

    Re-parsing the written file yields field-identical records; columns the
    typed record does not carry are left empty.
    """
    kind = TableKind(table_kind)
    schema = SCHEMAS[kind]
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(schema.columns)
        for row_id, record in enumerate(records, start=1):
            values = schema.unparse_row(record, row_id)
            writer.writerow([values.get(col, "") for col in schema.columns])


_DICT_TABLE: dict[DictionaryKind, TableKind] = {
    DictionaryKind.ICD_DIAGNOSES: TableKind.D_ICD_DIAGNOSES,
    DictionaryKind.ICD_PROCEDURES: TableKind.D_ICD_PROCEDURES,
    DictionaryKind.ITEMS: TableKind.D_ITEMS,
    DictionaryKind.LABITEMS: TableKind.D_LABITEMS,
}


def load_dictionary(path: str | Path, kind: DictionaryKind | str) -> dict:
    """Load a code -> description map from a dictionary table.

    Duplicate codes keep the first occurrence and log a warning. ICD maps are
    keyed by code string, item maps by integer item id.
    """
    result = parse_table(path, _DICT_TABLE[DictionaryKind(kind)])
    mapping: dict = {}
    for code, description in result.records:
        if code in mapping:
            log.warning("%s: duplicate code %r, keeping first occurrence", Path(path).name, code)
            continue
        mapping[code] = description
    return mapping


@dataclass
class AdmissionIndex:
    """O(1) lookup from hadm_id to its (Patient, Admission) pair."""

    entries: dict[int, tuple[Patient, Admission]]
    issues: list[RejectRow] = field(default_factory=list)

    def __contains__(self, hadm_id: int) -> bool:
        return hadm_id in self.entries

    def __getitem__(self, hadm_id: int) -> tuple[Patient, Admission]:
        return self.entries[hadm_id]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def build_admission_index(patients: Iterable[Patient], admissions: Iterable[Admission]) -> AdmissionIndex:
    """Join admissions to patients by subject_id.

    Admissions whose subject_id has no Patient record are excluded from the
    index and reported in the integrity issue list (row = hadm_id).
    """
    by_subject = {p.subject_id: p for p in patients}
    entries: dict[int, tuple[Patient, Admission]] = {}
    issues: list[RejectRow] = []
    for adm in admissions:
        patient = by_subject.get(adm.subject_id)
        if patient is None:
            issues.append(RejectRow(
                "ADMISSIONS", adm.hadm_id,
                f"hadm_id {adm.hadm_id} references unknown subject_id {adm.subject_id}"))
            continue
        entries[adm.hadm_id] = (patient, adm)
    return AdmissionIndex(entries=entries, issues=issues)


def cap_codes(events: Iterable[CodedEvent], limit: int = 5) -> list[CodedEvent]:
    """Keep at most `limit` codes per (hadm_id, kind), ordered by seq_num."""
    grouped: dict[tuple[int, str], list[CodedEvent]] = {}
    for event in events:
        grouped.setdefault((event.hadm_id, event.kind), []).append(event)
    retained: list[CodedEvent] = []
    for key in sorted(grouped):
        ordered = sorted(grouped[key], key=lambda e: e.seq_num)
        retained.extend(ordered[:limit])
    return retained


def attach_descriptions(events: Iterable[CodedEvent],
                        diagnoses_map: dict[str, str],
                        procedures_map: dict[str, str]) -> list[CodedEvent]:
    """Return coded events with dictionary descriptions filled in when known."""
    out = []
    for event in events:
        source = diagnoses_map if event.kind == "diagnosis" else procedures_map
        description = source.get(event.code)
        out.append(CodedEvent(event.hadm_id, event.seq_num, event.code, event.kind, description))
    return out


def attach_item_labels(observations: Iterable[ChartObservation],
                       items_map: dict[int, str]) -> list[ChartObservation]:
    """Return chart observations with D_ITEMS labels filled in when known."""
    out = []
    for obs in observations:
        label = items_map.get(obs.item_id, obs.label)
        out.append(ChartObservation(obs.row_id, obs.hadm_id, obs.item_id,
                                    obs.charttime, obs.value_num, obs.unit, label))
    return out


def write_rejects(path: str | Path, rejects: Iterable[RejectRow]) -> None:
    """Write a rejects/integrity report as JSON lines of {file, row, reason}."""
    with Path(path).open("w", encoding="utf-8") as handle:
        for reject in rejects:
            handle.write(json.dumps(reject.to_json(), sort_keys=True) + "\n")


def records_equal(a, b) -> bool:
    """Field-by-field equality helper used by round-trip checks."""
    if type(a) is not type(b):
        return False
    return all(getattr(a, f.name) == getattr(b, f.name) for f in dc_fields(a))
