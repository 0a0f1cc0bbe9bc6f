"""Command-line interface.

Exit codes: 0 success, 1 validation/usage problems, 2 I/O and network
problems.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from types import SimpleNamespace

import click

from . import __version__
from .datasets import (
    build_preference_pairs,
    build_sft_dataset,
    export_training_config,
    read_sequential_records,
    split as split_ids,
    write_preference_pairs,
    write_sequential_records,
    write_sft_examples,
)
from .errors import GatewayError, NoteForgeError, ValidationError
from .evaluation import evaluate_pair, write_report_json
from .gateway import EndpointConfig, GatewayClient, GenerationParams
from .ingest import write_rejects
from .judge import aggregate, judge as run_judge, render_markdown_report
from .pipeline import ingest_tables, run_pipeline

_data_option = click.option(
    "--data", "data_dir", required=True,
    type=click.Path(path_type=Path), help="Directory of EMR CSV exports.")
_out_option = click.option(
    "--out", "out_dir", required=True,
    type=click.Path(path_type=Path), help="Output directory.")


def _client_from(gateway_url: str | None) -> GatewayClient:
    if gateway_url:
        return GatewayClient(EndpointConfig(base_url=gateway_url))
    return GatewayClient(EndpointConfig.from_env())


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


@click.group()
@click.version_option(version=__version__, prog_name="note-forge")
def cli():
    """Build, train-prep, and evaluate hospital-course summary datasets."""


def entry():
    try:
        cli.main(standalone_mode=False)
    except click.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except GatewayError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except NoteForgeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    sys.exit(0)


@cli.command()
@_data_option
@_out_option
def ingest(data_dir: Path, out_dir: Path):
    """Parse every table in the export; write counts and rejected rows."""
    counts, rejects = ingest_tables(data_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "ingest_summary.json", counts)
    write_rejects(out_dir / "rejects.jsonl", rejects)
    accepted = sum(c["accepted"] for c in counts.values())
    click.echo(f"ingested {len(counts)} tables: "
               f"{accepted} rows accepted, {len(rejects)} rejected")


@cli.command()
@_data_option
@_out_option
@click.option("--min-age", default=19, show_default=True)
@click.option("--max-los", "max_los_days", default=7.0, show_default=True)
@click.option("--max-summary-words", default=500, show_default=True)
def cohort(data_dir: Path, out_dir: Path, min_age, max_los_days,
           max_summary_words):
    """Select qualifying admissions and report each exclusion."""
    result = run_pipeline(data_dir, min_age=min_age,
                          max_los_days=max_los_days,
                          max_summary_words=max_summary_words)
    out_dir.mkdir(parents=True, exist_ok=True)
    members = [{
        "subject_id": m.subject_id,
        "hadm_id": m.hadm_id,
        "age": m.age.years,
        "reference_row_id": m.reference.row_id,
        "reference_words": m.reference_words,
    } for m in sorted(result.cohort.members, key=lambda m: m.hadm_id)]
    exclusions = [{
        "hadm_id": e.hadm_id,
        "subject_id": e.subject_id,
        "reason": e.reason,
        "detail": e.detail,
    } for e in result.cohort.exclusions]
    _write_json(out_dir / "cohort.json",
                {"members": members, "exclusions": exclusions})
    click.echo(f"cohort: {len(members)} admissions kept, "
               f"{len(exclusions)} excluded")


@cli.command()
@_data_option
@_out_option
@click.option("--seed", type=int, default=None,
              help="Also split and export SFT files plus a training config.")
@click.option("--variant", default="both", show_default=True,
              type=click.Choice(["table", "text", "both"]))
def build(data_dir: Path, out_dir: Path, seed, variant):
    """Run the full pipeline and write the sequential dataset."""
    result = run_pipeline(data_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_sequential_records(result.records, out_dir / "sequential.jsonl")
    write_rejects(out_dir / "rejects.jsonl", result.rejects)
    _write_json(out_dir / "vocabulary.json", {
        "drugs": sorted(result.vocabularies.drugs),
        "chart_items": sorted(result.vocabularies.chart_items),
        "drug_coverage": {k: v for k, v in
                          sorted(result.vocabularies.drug_coverage.items())},
        "item_coverage": {str(k): v for k, v in
                          sorted(result.vocabularies.item_coverage.items())},
    })
    click.echo(f"built {len(result.records)} sequential records "
               f"-> {out_dir / 'sequential.jsonl'}")
    if seed is None:
        return
    dataset_split = split_ids(result.records, seed=seed)
    _write_json(out_dir / "split.json", {
        "seed": seed,
        "train": list(dataset_split.train),
        "validation": list(dataset_split.validation),
        "test": list(dataset_split.test),
    })
    sft = build_sft_dataset(result.records, dataset_split, variant=variant)
    for name in ("train", "validation", "test"):
        write_sft_examples(getattr(sft, name), out_dir / f"sft_{name}.jsonl")
    export_training_config(out_dir / "train.toml")
    sizes = dataset_split.sizes()
    click.echo(f"split seed {seed}: {sizes[0]}/{sizes[1]}/{sizes[2]} "
               "train/validation/test")


@cli.command()
@click.option("--n", "count", type=int, default=None,
              help="Split ids 1..N.")
@click.option("--ids-file", type=click.Path(path_type=Path), default=None,
              help="File with one id per line (alternative to --n).")
@click.option("--seed", type=int, required=True)
@click.option("--test-fraction", default=0.2, show_default=True)
@click.option("--val-fraction", default=0.2, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              default=None, help="Write full membership JSON here.")
def split(count, ids_file, seed, test_fraction, val_fraction, out_path):
    """Partition ids into train/validation/test and print the sizes."""
    if (count is None) == (ids_file is None):
        raise click.UsageError("provide exactly one of --n or --ids-file")
    if count is not None:
        ids = list(range(1, count + 1))
    else:
        ids = [int(line) for line in ids_file.read_text().split()]
    result = split_ids(ids, seed=seed, test_fraction=test_fraction,
                       val_fraction=val_fraction)
    sizes = result.sizes()
    click.echo(json.dumps({
        "n": len(ids), "seed": seed,
        "sizes": {"train": sizes[0], "validation": sizes[1],
                  "test": sizes[2]},
    }))
    if out_path is not None:
        _write_json(out_path, {
            "seed": seed,
            "train": list(result.train),
            "validation": list(result.validation),
            "test": list(result.test),
        })


@cli.command()
@click.option("--sequential", "sequential_path", required=True,
              type=click.Path(path_type=Path),
              help="sequential.jsonl from the build step.")
@click.option("--rejected", "rejected_path", required=True,
              type=click.Path(path_type=Path),
              help='JSONL of {"hadm_id", "summary"} weak-model outputs.')
@click.option("--out", "out_path", required=True,
              type=click.Path(path_type=Path))
def pairs(sequential_path: Path, rejected_path: Path, out_path: Path):
    """Build preference pairs from references and weaker summaries."""
    records = [SimpleNamespace(hadm_id=row["hadm_id"],
                               instruction=row["instruction"],
                               reference=row["reference"])
               for row in read_sequential_records(sequential_path)]
    rejected = {}
    with rejected_path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                row = json.loads(line)
                rejected[int(row["hadm_id"])] = row["summary"]
    result = build_preference_pairs(records, rejected)
    write_preference_pairs(result, out_path)
    click.echo(f"wrote {len(result)} preference pairs -> {out_path}")


@cli.command()
@click.option("--sequential", "sequential_path", required=True,
              type=click.Path(path_type=Path))
@click.option("--out", "out_path", required=True,
              type=click.Path(path_type=Path))
@click.option("--hadm", "hadm_ids", type=int, multiple=True,
              help="Limit generation to these admissions.")
@click.option("--gateway-url", default=None,
              help="Gateway base URL (default: NOTE_GATEWAY_URL).")
@click.option("--max-new-tokens", default=1024, show_default=True)
def generate(sequential_path: Path, out_path: Path, hadm_ids, gateway_url,
             max_new_tokens):
    """Generate a summary for each sequential record via the gateway."""
    rows = read_sequential_records(sequential_path)
    if hadm_ids:
        wanted = set(hadm_ids)
        rows = [row for row in rows if row["hadm_id"] in wanted]
        if not rows:
            raise ValidationError(f"no records match --hadm {sorted(wanted)}")
    params = GenerationParams(max_new_tokens=max_new_tokens)
    with _client_from(gateway_url) as client, \
            out_path.open("w", encoding="utf-8") as handle:
        for row in rows:
            summary = client.generate(row["instruction"], params)
            handle.write(json.dumps({"hadm_id": row["hadm_id"],
                                     "summary": summary},
                                    ensure_ascii=False) + "\n")
    click.echo(f"generated {len(rows)} summaries -> {out_path}")


@cli.command("eval")
@click.option("--ref", "ref_path", required=True,
              type=click.Path(path_type=Path), help="Reference text file.")
@click.option("--hyp", "hyp_path", required=True,
              type=click.Path(path_type=Path), help="Hypothesis text file.")
@click.option("--lexical-only", is_flag=True,
              help="Skip the gateway-backed metrics.")
@click.option("--pair-id", default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              default=None)
@click.option("--gateway-url", default=None)
def eval_command(ref_path: Path, hyp_path: Path, lexical_only, pair_id,
                 out_path, gateway_url):
    """Score a hypothesis text against a reference text."""
    reference = ref_path.read_text(encoding="utf-8")
    hypothesis = hyp_path.read_text(encoding="utf-8")
    pair_id = pair_id or hyp_path.stem
    if lexical_only:
        report = evaluate_pair(reference, hypothesis, pair_id=pair_id,
                               lexical_only=True)
    else:
        with _client_from(gateway_url) as client:
            report = evaluate_pair(reference, hypothesis, client,
                                   pair_id=pair_id)
    click.echo(json.dumps(report.as_dict(), indent=2))
    if out_path is not None:
        write_report_json(report, out_path)


@cli.command("judge")
@click.option("--input", "input_path", required=True,
              type=click.Path(path_type=Path),
              help="The record the summaries describe.")
@click.option("--summary", "summaries", required=True, multiple=True,
              help="NAME=PATH of a candidate summary; repeatable.")
@click.option("--trials", default=1, show_default=True)
@click.option("--transcripts", "transcript_dir",
              type=click.Path(path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              default=None, help="Aggregate scores JSON.")
@click.option("--report", "report_path", type=click.Path(path_type=Path),
              default=None, help="Markdown score table.")
@click.option("--gateway-url", default=None)
def judge_command(input_path: Path, summaries, trials, transcript_dir,
                  out_path, report_path, gateway_url):
    """Have a judge model score candidate summaries on the rubric."""
    named = {}
    for item in summaries:
        name, _, path = item.partition("=")
        if not path:
            raise click.UsageError(
                f"--summary takes NAME=PATH, got {item!r}")
        named[name] = Path(path).read_text(encoding="utf-8")
    input_text = input_path.read_text(encoding="utf-8")
    with _client_from(gateway_url) as client:
        result = run_judge(input_text, named, client, trials=trials,
                           transcript_dir=transcript_dir)
    aggregates = {}
    for name in named:
        cards = result.scorecards_for(name)
        if not cards:
            raise ValidationError(f"no usable scorecards for {name!r}")
        aggregates[name] = aggregate(cards)
    for name, agg in aggregates.items():
        click.echo(f"{name}: total {agg.total_mean:.1f} "
                   f"(±{agg.total_std:.2f}) over {agg.n} trials")
    if result.failures:
        click.echo(f"{len(result.failures)} failed trials", err=True)
    if out_path is not None:
        _write_json(out_path,
                    {name: agg.as_dict() for name, agg in aggregates.items()})
    if report_path is not None:
        report_path.write_text(render_markdown_report(aggregates),
                               encoding="utf-8")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--data", "data_dir", type=click.Path(path_type=Path),
              default=None, help="Defaults to the bundled fixture export.")
@click.option("--gateway-url", default=None)
@click.option("--frontend-dist", type=click.Path(path_type=Path),
              default=None)
def serve(host, port, data_dir, gateway_url, frontend_dist):
    """Run the two-button demo service."""
    import uvicorn

    from .service import create_app

    gateway = _client_from(gateway_url) if gateway_url else None
    app = create_app(gateway=gateway, data_dir=data_dir,
                     frontend_dist=frontend_dist)
    uvicorn.run(app, host=host, port=port)


@cli.command("mock-serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--rule-seed", default=0, show_default=True)
@click.option("--vocab-size", default=50, show_default=True)
@click.option("--embedding-dim", default=32, show_default=True)
@click.option("--logprob-rule", default="hashed", show_default=True,
              type=click.Choice(["hashed", "uniform"]))
def mock_serve(host, port, rule_seed, vocab_size, embedding_dim,
               logprob_rule):
    """Run the deterministic mock model server."""
    import uvicorn

    from .gateway import build_mock_app

    app = build_mock_app(rule_seed=rule_seed, vocab_size=vocab_size,
                         embedding_dim=embedding_dim,
                         logprob_rule=logprob_rule)
    uvicorn.run(app, host=host, port=port)
