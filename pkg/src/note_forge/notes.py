"""Clinical note cleaning and section extraction.

Raw NOTEEVENTS text arrives with de-identification placeholders, ASCII
banner/divider runs, and large blank gaps. Cleaning is deterministic,
idempotent, and never lengthens the text, so it can be applied defensively
at any pipeline stage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime
from typing import Iterable, Optional

from .ingest import NoteCategory, NoteRow

_DEID_SPAN = re.compile(r"\[\*\*(.*?)\*\*\]", re.DOTALL)
_DATE_LIKE = re.compile(r"^\d[\d/\-]*\d$")
# runs of length >= 2 of the same divider/banner character
_CHAR_RUN = re.compile(r"([-_=*#~.])\1+")

FINAL_REPORT_MARKER = "FINAL REPORT"
CONCLUSIONS_MARKER = "Conclusions:"


def _replace_deid(match: re.Match) -> str:
    inner = match.group(1).strip()
    if "name" in inner.casefold():
        return "NAME"
    if _DATE_LIKE.fullmatch(inner):
        return inner
    return "DEID"


def _collapse_blank_runs(text: str) -> str:
    lines = text.split("\n")
    out: list[str] = []
    blanks: list[str] = []
    for line in lines:
        if line.strip() == "":
            blanks.append(line)
            continue
        if len(blanks) >= 3:
            out.append("")
        else:
            out.extend(blanks)
        blanks = []
        out.append(line)
    # trailing blank run is dropped by the final strip either way
    if blanks and len(blanks) < 3:
        out.extend(blanks)
    elif blanks:
        out.append("")
    return "\n".join(out)


def clean_text(text: str) -> str:
    """Normalize one note body.

    De-identification spans become NAME (inner text mentions a name), the
    literal shifted date (inner text is date-shaped), or DEID. Runs of the
    same divider character collapse to one, and three or more consecutive
    blank lines collapse to a single empty line.
    """
    text = _DEID_SPAN.sub(_replace_deid, text)
    text = _CHAR_RUN.sub(r"\1", text)
    text = _collapse_blank_runs(text)
    return text.strip()


def word_count(text: str) -> int:
    return len(text.split())


def _extract(text: str, category: NoteCategory) -> tuple[str, bool]:
    if category is NoteCategory.RADIOLOGY:
        marker, position = FINAL_REPORT_MARKER, text.rfind(FINAL_REPORT_MARKER)
    elif category is NoteCategory.ECHO:
        marker, position = CONCLUSIONS_MARKER, text.find(CONCLUSIONS_MARKER)
    else:
        return text, False
    if position < 0:
        return text, True
    section = text[position + len(marker):]
    if not section.strip():
        return text, True
    return section, False


def extract_section(text: str, category: NoteCategory) -> str:
    """Return the clinically dense part of a note.

    Radiology keeps what follows the last FINAL REPORT banner (the signed
    read, or its addendum); Echo keeps what follows the first Conclusions:
    header. All other categories pass through whole. When the marker is
    missing or what follows it is empty, the whole text is kept.
    """
    return _extract(text, category)[0]


@dataclass(frozen=True)
class NoteDocument:
    """A cleaned, section-extracted note ready for timeline use."""

    row_id: int
    hadm_id: Optional[int]
    category: NoteCategory
    chartdate: date
    charttime: Optional[datetime]
    text: str
    fallback_used: bool = False


def process_note(note: NoteRow) -> NoteDocument:
    """Section-extract then clean one parsed note row."""
    section, fallback = _extract(note.raw_text, note.category)
    return NoteDocument(
        row_id=note.row_id,
        hadm_id=note.hadm_id,
        category=note.category,
        chartdate=note.chartdate,
        charttime=note.charttime,
        text=clean_text(section),
        fallback_used=fallback,
    )


def note_census(notes: Iterable[NoteRow]) -> dict[NoteCategory, int]:
    """Count notes per category, reporting zero for absent categories."""
    census = {category: 0 for category in NoteCategory}
    for note in notes:
        census[note.category] += 1
    return census
