"""Dataset assembly: splits, SFT examples, preference pairs, training config.

Everything here is deterministic given a seed. Splits shuffle a sorted id
list so that input ordering never changes membership.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import random
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .timeline import INPUT_VARIANTS, SequentialRecord

logger = logging.getLogger(__name__)

DEFAULT_TEST_FRACTION = 0.2
DEFAULT_VAL_FRACTION = 0.2
DEFAULT_DPO_BETA = 0.1


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint train/validation/test hadm_id partitions plus the seed used."""

    train: tuple[int, ...]
    validation: tuple[int, ...]
    test: tuple[int, ...]
    seed: int

    def sizes(self) -> tuple[int, int, int]:
        return (len(self.train), len(self.validation), len(self.test))

    def partition_of(self, hadm_id: int) -> str:
        for name in ("train", "validation", "test"):
            if hadm_id in getattr(self, name):
                return name
        raise KeyError(hadm_id)


def _hadm_ids(records) -> list[int]:
    ids = []
    for item in records:
        ids.append(item.hadm_id if hasattr(item, "hadm_id") else int(item))
    return ids


def split(records, seed: int,
          test_fraction: float = DEFAULT_TEST_FRACTION,
          val_fraction: float = DEFAULT_VAL_FRACTION) -> DatasetSplit:
    """Partition admissions into train/validation/test sets.

    The test set takes ceil(n * test_fraction) ids; validation takes
    ceil(m * val_fraction) of the m that remain; train keeps the rest.
    Accepts either hadm_ids or objects carrying a .hadm_id attribute.
    """
    ids = _hadm_ids(records)
    if len(ids) != len(set(ids)):
        raise ValidationError("duplicate hadm_ids in split input")
    if len(ids) < 3:
        raise ValidationError(f"need at least 3 records to split, got {len(ids)}")
    for name, frac in (("test_fraction", test_fraction), ("val_fraction", val_fraction)):
        if not 0.0 < frac < 1.0:
            raise ValidationError(f"{name} must be in (0, 1), got {frac}")

    ids.sort()
    rng = random.Random(seed)
    rng.shuffle(ids)

    n = len(ids)
    n_test = math.ceil(n * test_fraction)
    remainder = ids[n_test:]
    n_val = math.ceil(len(remainder) * val_fraction)
    return DatasetSplit(
        train=tuple(remainder[n_val:]),
        validation=tuple(remainder[:n_val]),
        test=tuple(ids[:n_test]),
        seed=seed,
    )


def _softplus(x: float) -> float:
    # max(x,0) + log1p(e^-|x|) never overflows; the naive form does past ~700.
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def dpo_loss(policy_lp_chosen: float, policy_lp_rejected: float,
             ref_lp_chosen: float, ref_lp_rejected: float,
             beta: float = DEFAULT_DPO_BETA) -> dict:
    """Preference loss for one pair of summaries.

    margin = beta * ((policy_chosen - ref_chosen) - (policy_rejected - ref_rejected))
    loss   = -log(sigmoid(margin)) = softplus(-margin)

    Returns {"loss": ..., "margin": ...}.
    """
    values = {
        "policy_lp_chosen": policy_lp_chosen,
        "policy_lp_rejected": policy_lp_rejected,
        "ref_lp_chosen": ref_lp_chosen,
        "ref_lp_rejected": ref_lp_rejected,
        "beta": beta,
    }
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value}")
    if beta <= 0:
        raise ValidationError(f"beta must be positive, got {beta}")

    margin = beta * ((policy_lp_chosen - ref_lp_chosen)
                     - (policy_lp_rejected - ref_lp_rejected))
    return {"loss": _softplus(-margin), "margin": margin}


@dataclass(frozen=True)
class SftExample:
    input_text: str
    reference: str


@dataclass(frozen=True)
class SftDataset:
    train: tuple[SftExample, ...]
    validation: tuple[SftExample, ...]
    test: tuple[SftExample, ...]


_VARIANT_FIELD = {"table": "input_table", "text": "input_text", "both": "input_both"}


def build_sft_dataset(records: Sequence[SequentialRecord], dataset_split: DatasetSplit,
                      variant: str = "both") -> SftDataset:
    """One SftExample per record, grouped by split partition."""
    if variant not in INPUT_VARIANTS:
        raise ValidationError(f"unknown input variant: {variant!r}")
    field = _VARIANT_FIELD[variant]
    buckets: dict[str, list[SftExample]] = {"train": [], "validation": [], "test": []}
    by_id = {r.hadm_id: r for r in records}
    for name in buckets:
        for hadm_id in getattr(dataset_split, name):
            record = by_id.get(hadm_id)
            if record is None:
                raise ValidationError(f"split references unknown hadm_id {hadm_id}")
            if not record.reference:
                raise ValidationError(f"record {hadm_id} has no reference summary")
            buckets[name].append(SftExample(input_text=getattr(record, field),
                                            reference=record.reference))
    return SftDataset(train=tuple(buckets["train"]),
                      validation=tuple(buckets["validation"]),
                      test=tuple(buckets["test"]))


@dataclass(frozen=True)
class PreferencePair:
    prompt: str
    chosen: str
    rejected: str


def build_preference_pairs(records: Sequence[SequentialRecord],
                           rejected_summaries: Mapping[int, str]) -> list[PreferencePair]:
    """Pair each record's reference against a weaker summary for the same stay.

    Pairs whose two sides are identical carry no preference signal and are
    dropped with a warning.
    """
    pairs = []
    for record in records:
        rejected = rejected_summaries.get(record.hadm_id)
        if not rejected:
            raise ValidationError(
                f"no rejected summary for hadm_id {record.hadm_id}")
        if rejected == record.reference:
            logger.warning(
                "dropping preference pair for hadm_id %d: rejected summary "
                "is identical to the reference", record.hadm_id)
            continue
        pairs.append(PreferencePair(prompt=record.instruction,
                                    chosen=record.reference,
                                    rejected=rejected))
    return pairs


# --- file formats -----------------------------------------------------------

def _write_jsonl(rows: Iterable[dict], path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def _read_jsonl(path) -> list[dict]:
    rows = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def write_sft_examples(examples: Iterable[SftExample], path) -> Path:
    return _write_jsonl(
        ({"input": e.input_text, "reference": e.reference} for e in examples), path)


def read_sft_examples(path) -> list[SftExample]:
    return [SftExample(input_text=row["input"], reference=row["reference"])
            for row in _read_jsonl(path)]


def write_preference_pairs(pairs: Iterable[PreferencePair], path) -> Path:
    return _write_jsonl(
        ({"prompt": p.prompt, "chosen": p.chosen, "rejected": p.rejected}
         for p in pairs), path)


def read_preference_pairs(path) -> list[PreferencePair]:
    return [PreferencePair(prompt=row["prompt"], chosen=row["chosen"],
                           rejected=row["rejected"])
            for row in _read_jsonl(path)]


def sequential_record_to_json(record: SequentialRecord) -> dict:
    return {
        "subject_id": record.subject_id,
        "hadm_id": record.hadm_id,
        "header": record.header,
        "events": [
            {"ts": e.ts.isoformat(sep=" "), "kind": e.kind, "text": e.text}
            for e in record.events
        ],
        "input_table": record.input_table,
        "input_text": record.input_text,
        "input_both": record.input_both,
        "instruction": record.instruction,
        "reference": record.reference,
    }


def write_sequential_records(records: Iterable[SequentialRecord], path) -> Path:
    return _write_jsonl((sequential_record_to_json(r) for r in records), path)


def read_sequential_records(path) -> list[dict]:
    """Sequential JSONL rows as dicts, event timestamps parsed back."""
    rows = _read_jsonl(path)
    for row in rows:
        for event in row["events"]:
            event["ts"] = datetime.fromisoformat(event["ts"])
    return rows


# --- training configuration -------------------------------------------------

TRAINING_DEFAULTS = {
    "lora": {
        "r": 16,
        "alpha": 16,
        "dropout": 0.05,
        "targets": ["q", "k", "v", "o", "gate"],
    },
    "sft": {
        "train_batch": 4,
        "eval_batch": 8,
        "optimizer": "paged adamw 8bit",
        "scheduler": "cosine",
        "grad_accum": 2,
    },
    "dpo": {
        "train_batch": 1,
        "eval_batch": 1,
        "optimizer": "paged adamw 8bit",
        "scheduler": "cosine",
        "grad_accum": 2,
        "beta": DEFAULT_DPO_BETA,
    },
}

# Bare names accepted as shorthand when they are unambiguous.
_OVERRIDE_SHORTHAND = {"beta": "dpo.beta"}

VALID_OVERRIDE_KEYS = tuple(sorted(
    f"{section}.{key}"
    for section, body in TRAINING_DEFAULTS.items()
    for key in body
))


def training_config(overrides: Mapping[str, object] | None = None) -> dict:
    """Defaults merged with dotted-key overrides, e.g. {"dpo.beta": 0.05}."""
    config = copy.deepcopy(TRAINING_DEFAULTS)
    for raw_key, value in (overrides or {}).items():
        key = _OVERRIDE_SHORTHAND.get(raw_key, raw_key)
        if key not in VALID_OVERRIDE_KEYS:
            raise ValidationError(
                f"unknown training config key {raw_key!r}; valid keys: "
                + ", ".join(VALID_OVERRIDE_KEYS))
        section, field = key.split(".", 1)
        current = config[section][field]
        if isinstance(current, bool) or isinstance(value, bool):
            raise ValidationError(f"{key} does not take a boolean")
        if isinstance(current, (int, float)):
            if not isinstance(value, (int, float)):
                raise ValidationError(f"{key} needs a number, got {value!r}")
            value = type(current)(value) if isinstance(current, float) else value
            if isinstance(current, int) and isinstance(value, float):
                raise ValidationError(f"{key} needs an integer, got {value!r}")
        elif isinstance(current, str):
            if not isinstance(value, str):
                raise ValidationError(f"{key} needs a string, got {value!r}")
        elif isinstance(current, list):
            if (not isinstance(value, (list, tuple))
                    or not all(isinstance(v, str) for v in value)):
                raise ValidationError(f"{key} needs a list of strings, got {value!r}")
            value = list(value)
        config[section][field] = value
    return config


def _toml_value(value) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ValidationError(f"cannot render {type(value).__name__} as TOML")


def render_training_config(config: Mapping[str, Mapping[str, object]]) -> str:
    lines = [
        "# Fine-tuning defaults for the summarization adapters.",
        "# Override individual values via export_training_config(overrides).",
    ]
    for section in ("lora", "sft", "dpo"):
        lines.append("")
        lines.append(f"[{section}]")
        for key, value in config[section].items():
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


def export_training_config(path, overrides: Mapping[str, object] | None = None) -> Path:
    """Write the merged training config as TOML, returning the path."""
    path = Path(path)
    path.write_text(render_training_config(training_config(overrides)),
                    encoding="utf-8")
    return path
