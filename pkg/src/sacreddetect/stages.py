"""Stage implementations behind the CLI: harvest, extract, match,
batch-build, classify, analyze, report.

Stages communicate only through files under the output root, each stage
directory carrying a manifest (see manifest.py). Re-running a stage whose
inputs are unchanged is a no-op; running a stage before its prerequisites
raises PrerequisiteError naming the command to run. One stage executes per
output root at a time, enforced with a lock file.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import requests

from .analytics import matrix as matrix_mod
from .analytics import reports as reports_mod
from .analytics.consistency import duplicate_consistency
from .analytics.stats import disagreement_ratios, group_rates, pairwise_agreement
from .analytics.terms import term_report
from .config import PipelineConfig
from .errors import (
    CdxParseError,
    ConfigError,
    PrerequisiteError,
    ProviderError,
    StageLockedError,
)
from .harvest import cdx, fetch, worklist
from .harvest.store import DocumentStore, RawDocument
from .hashing import sha256_bytes, sha256_file, sha256_text
from .jsonlio import read_jsonl, write_json, write_jsonl, write_text
from .judge import batch as batch_mod
from .judge import providers as providers_mod
from .judge.prompts import prompt_hash
from .judge.verdicts import Verdict
from .lexicon.matcher import (
    Match,
    MatchResult,
    classify_corpus,
    compile_matcher,
    yes_rate_summary,
)
from .lexicon.tree import lexicon_to_json, load_lexicon
from .manifest import is_current, read_manifest, write_manifest
from .textpipe.corpus import (
    CleanDocument,
    SentenceRecord,
    build_sentence_corpus,
    corpus_summary,
    filter_corpus,
)
from .textpipe.htmltext import extract_main_text
from .textpipe.langid import detect_language
from .textpipe.sentences import SPLITTER_VERSION

log = logging.getLogger(__name__)

STAGES = ("harvest", "extract", "match", "batch-build", "classify", "analyze", "report")

SAMPLE_PAGES = {
    "cca": "https://christianclimateaction.org/2021/08/26/following-christ-to-prison-pt-1/",
    "greenfaith": "https://greenfaith.org/press-release-body-soul-against-eacop-2/page/2/?et_blog",
    "ien": "https://www.ienearth.org/?p=2075",
    "icsd": "https://interfaithsustain.com/?p=15296",
}
SAMPLE_FETCHED_AT = datetime(2024, 8, 28, tzinfo=timezone.utc)
SAMPLE_SNAPSHOT_TS = "20240828000000"


class Layout:
    """Directory layout under one output root."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def raw(self) -> Path:
        return self.root / "raw"

    @property
    def corpus(self) -> Path:
        return self.root / "corpus"

    @property
    def labels_tree(self) -> Path:
        return self.root / "labels" / "tree"

    def labels_model(self, model_id: str) -> Path:
        return self.root / "labels" / model_id

    def batches(self, model_id: str) -> Path:
        return self.root / "batches" / model_id

    @property
    def analysis(self) -> Path:
        return self.root / "analysis"

    @property
    def reports(self) -> Path:
        return self.root / "reports"


@contextmanager
def stage_lock(root: Path):
    """One stage execution per output root; stale locks from dead processes
    are stolen."""
    root.mkdir(parents=True, exist_ok=True)
    lock_path = root / ".lock"
    if lock_path.is_file():
        try:
            pid = int(lock_path.read_text().strip())
            os.kill(pid, 0)
        except (ValueError, ProcessLookupError):
            lock_path.unlink(missing_ok=True)  # stale
        except PermissionError:
            raise StageLockedError(f"output root is locked by pid in {lock_path}") from None
        else:
            raise StageLockedError(
                f"another stage (pid {pid}) is running on this output root"
            )
    fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        lock_path.unlink(missing_ok=True)


def _hash_dir_files(directory: Path, pattern: str = "*.jsonl") -> dict[str, str]:
    return {
        p.name: sha256_file(p) for p in sorted(directory.glob(pattern)) if p.is_file()
    }


def _require_manifest(directory: Path, producing_command: str) -> None:
    if read_manifest(directory) is None:
        raise PrerequisiteError(
            f"missing outputs under {directory}; run `sacreddetect {producing_command}` first"
        )


def _sources_fingerprint(config: PipelineConfig) -> str:
    payload = json.dumps(
        [
            [s.ngo_id, s.group, s.base_url, s.from_year, s.to_year]
            for s in config.sources
        ]
    )
    return sha256_text(payload)


# --- harvest ----------------------------------------------------------------


def run_harvest(config: PipelineConfig, resume: bool = True, sample: bool = False) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        if sample:
            _harvest_sample(config, layout)
        else:
            _harvest_live(config, layout, resume=resume)


def _harvest_sample(config: PipelineConfig, layout: Layout) -> None:
    started = datetime.now(timezone.utc).isoformat()
    data = resources.files("sacreddetect").joinpath("data", "sample")
    inputs = {"sources": _sources_fingerprint(config)}
    pages: dict[str, bytes] = {}
    for spec in config.sources:
        if spec.ngo_id not in SAMPLE_PAGES:
            log.warning("no bundled sample page for %s; skipped", spec.ngo_id)
            continue
        body = data.joinpath(f"{spec.ngo_id}.html").read_bytes()
        pages[spec.ngo_id] = body
        inputs[f"sample/{spec.ngo_id}.html"] = sha256_bytes(body)
    if is_current(layout.raw, inputs):
        log.info("harvest: up to date")
        return
    store = DocumentStore(layout.raw)
    for ngo_id, body in pages.items():
        url = SAMPLE_PAGES[ngo_id]
        if store.has_url(url):
            continue
        store.append(
            RawDocument.make(
                ngo_id=ngo_id,
                url=url,
                status=200,
                content_type="text/html; charset=utf-8",
                body=body,
                fetched_at=SAMPLE_FETCHED_AT,
                snapshot_ts=SAMPLE_SNAPSHOT_TS,
            )
        )
    store.flush_index()
    write_manifest(layout.raw, "harvest", inputs, {"mode": "sample"}, started)
    log.info("harvest: installed %d sample documents", len(pages))


def _harvest_live(config: PipelineConfig, layout: Layout, resume: bool) -> None:
    started = datetime.now(timezone.utc).isoformat()
    store = DocumentStore(layout.raw)
    session = fetch.make_session()
    gate = fetch.HostGate(config.policy.rate_per_host)
    robots = fetch.RobotsCache(session, timeout=config.policy.timeout)
    totals: Counter = Counter()

    def harvest_one(spec) -> Counter:
        counters: Counter = Counter()
        query = cdx.build_cdx_query(spec)
        log.info("harvest %s: querying CDX index", spec.ngo_id)
        try:
            resp = session.get(query, timeout=max(config.policy.timeout, 60.0))
            resp.raise_for_status()
            records = cdx.parse_cdx_response(resp.text, counters)
        except (requests.RequestException, CdxParseError) as exc:
            log.error("harvest %s: CDX query failed: %s", spec.ngo_id, exc)
            counters["cdx_failed"] = 1
            return counters
        urls = worklist.derive_worklist(records, counters)
        snapshots = cdx.snapshot_timestamps(records)
        log.info("harvest %s: %d snapshot records, %d live URLs", spec.ngo_id, len(records), len(urls))
        counters.update(
            fetch.harvest_source(
                spec, urls, snapshots, store, config.policy, session, gate, robots, resume
            )
        )
        return counters

    # One worker per source: sources are distinct hosts, so this is the
    # per-host serial queue, and the HostGate still guards any shared host.
    with ThreadPoolExecutor(max_workers=max(1, len(config.sources))) as pool:
        for counters in pool.map(harvest_one, config.sources):
            totals.update(counters)
    store.flush_index()
    inputs = {"sources": _sources_fingerprint(config)}
    inputs.update(_hash_dir_files(layout.raw))
    write_manifest(
        layout.raw,
        "harvest",
        inputs,
        {"mode": "live", "policy": vars(config.policy), "counters": dict(totals)},
        started,
    )
    log.info("harvest: %s", dict(totals))


# --- extract ----------------------------------------------------------------


def run_extract(config: PipelineConfig) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        _require_manifest(layout.raw, "harvest")
        started = datetime.now(timezone.utc).isoformat()
        inputs = _hash_dir_files(layout.raw)
        inputs["splitter_version"] = sha256_text(SPLITTER_VERSION)
        if is_current(layout.corpus, inputs):
            log.info("extract: up to date")
            return

        store = DocumentStore(layout.raw)
        counters: Counter = Counter()
        docs: list[CleanDocument] = []
        for ngo_id in store.ngo_ids():
            for raw_doc in store.iter_ngo(ngo_id):
                if not raw_doc.ok or not raw_doc.body:
                    counters["skipped_failed_fetch"] += 1
                    continue
                ctype = raw_doc.content_type.lower()
                if "pdf" in ctype or raw_doc.body.startswith(b"%PDF"):
                    # Stored for a future extractor; not text-extracted here.
                    counters["skipped_pdf"] += 1
                    continue
                text = extract_main_text(raw_doc.body, counters)
                if text:
                    lang, confidence = detect_language(text)
                else:
                    lang, confidence = "en", 0.0
                docs.append(
                    CleanDocument(
                        doc_id=raw_doc.doc_id,
                        ngo_id=raw_doc.ngo_id,
                        text=text,
                        lang=lang,
                        lang_confidence=confidence,
                    )
                )

        kept = filter_corpus(docs, counters)
        records = build_sentence_corpus(kept)
        by_ngo: dict[str, list[SentenceRecord]] = {}
        for rec in records:
            by_ngo.setdefault(rec.ngo_id, []).append(rec)
        for ngo_id in sorted({d.ngo_id for d in kept}):
            write_jsonl(
                layout.corpus / f"{ngo_id}.jsonl",
                (r.to_dict() for r in by_ngo.get(ngo_id, [])),
            )
        summary = corpus_summary(kept, records, config.groups())
        _write_summary_csv(layout.corpus / "summary.csv", summary)
        write_manifest(
            layout.corpus,
            "extract",
            inputs,
            {"splitter_version": SPLITTER_VERSION, "counters": dict(counters)},
            started,
        )
        log.info(
            "extract: %d documents -> %d sentences (%s)",
            len(kept),
            len(records),
            dict(counters),
        )


def _write_summary_csv(path: Path, summary: list[dict]) -> None:
    header = ["ngo_id", "group", "n_documents", "n_sentences"]
    rows = [header] + [[row[h] for h in header] for row in summary]
    out = "\n".join(",".join(str(c) for c in row) for row in rows) + "\n"
    write_text(path, out)


def load_corpus(layout: Layout, ngo_id: str | None = None) -> list[SentenceRecord]:
    records = []
    paths = (
        [layout.corpus / f"{ngo_id}.jsonl"]
        if ngo_id
        else sorted(layout.corpus.glob("*.jsonl"))
    )
    for path in paths:
        if path.is_file():
            records.extend(SentenceRecord.from_dict(row) for row in read_jsonl(path))
    return records


# --- match ------------------------------------------------------------------


def run_match(
    config: PipelineConfig,
    lexicon_path: Path | None = None,
    corpus_dir: Path | None = None,
    out_dir: Path | None = None,
) -> None:
    """Staged match over the pipeline corpus, or ad-hoc over explicit dirs."""
    layout = Layout(config.output_root)
    src = corpus_dir or layout.corpus
    dst = out_dir or layout.labels_tree
    with stage_lock(layout.root):
        if corpus_dir is None:
            _require_manifest(layout.corpus, "extract")
        elif not any(src.glob("*.jsonl")):
            raise PrerequisiteError(f"no corpus files (*.jsonl) under {src}")
        started = datetime.now(timezone.utc).isoformat()
        lexicon_file = lexicon_path or config.lexicon_path
        inputs = _hash_dir_files(src)
        inputs["lexicon"] = sha256_file(lexicon_file)
        if is_current(dst, inputs):
            log.info("match: up to date")
            return

        lexicon = load_lexicon(lexicon_file)
        matcher = compile_matcher(lexicon)
        write_text(dst / "lexicon.json", lexicon_to_json(lexicon))  # canonical export
        for path in sorted(src.glob("*.jsonl")):
            corpus = [SentenceRecord.from_dict(row) for row in read_jsonl(path)]
            results = classify_corpus(matcher, corpus)
            write_jsonl(dst / path.name, (r.to_dict() for r in results))
            for ngo_id, entry in yes_rate_summary(corpus, results).items():
                log.info(
                    "match %s: %d/%d yes (%.1f%%)",
                    ngo_id,
                    entry["yes"],
                    entry["n"],
                    entry["pct_yes"],
                )
        write_manifest(
            dst,
            "match",
            inputs,
            {"lexicon": str(lexicon_file), "patterns": matcher.pattern_count},
            started,
        )


# --- batch-build ------------------------------------------------------------


def run_batch_build(config: PipelineConfig) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        _require_manifest(layout.corpus, "extract")
        for model in config.models:
            started = datetime.now(timezone.utc).isoformat()
            out_dir = layout.batches(model.model_id)
            inputs = _hash_dir_files(layout.corpus)
            inputs["prompt"] = prompt_hash(config.prompt_template)
            inputs["model"] = sha256_text(f"{model.model_id}|{model.provider}")
            if is_current(out_dir, inputs):
                log.info("batch-build %s: up to date", model.model_id)
                continue
            shape = "groq-batch" if model.provider == "groq-batch" else "openai-batch"
            counters: Counter = Counter()
            for path in sorted(layout.corpus.glob("*.jsonl")):
                corpus = [SentenceRecord.from_dict(row) for row in read_jsonl(path)]
                lines = batch_mod.build_batch_file(
                    corpus, config.prompt_template, model.model_id, shape, counters
                )
                write_text(out_dir / path.name, "\n".join(lines) + ("\n" if lines else ""))
            write_manifest(
                out_dir,
                "batch-build",
                inputs,
                {
                    "template": config.prompt_template,
                    "shape": shape,
                    "counters": dict(counters),
                },
                started,
            )
            log.info("batch-build %s: done", model.model_id)


# --- classify ---------------------------------------------------------------


def run_classify(
    config: PipelineConfig,
    stub: bool = False,
    only_model: str | None = None,
    provider_override: str | None = None,
    strict_json: bool = False,
) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        models = [m for m in config.models if only_model in (None, m.model_id)]
        if not models:
            raise ConfigError(f"no configured model matches {only_model!r}")
        for model in models:
            batch_dir = layout.batches(model.model_id)
            _require_manifest(batch_dir, "batch-build")
            provider_name = "stub" if stub else (provider_override or model.provider)
            provider = providers_mod.get_provider(provider_name)
            started = datetime.now(timezone.utc).isoformat()
            out_dir = layout.labels_model(model.model_id)
            inputs = {
                name: digest
                for name, digest in _hash_dir_files(batch_dir).items()
                if not name.endswith(".results.jsonl")
            }
            inputs["provider"] = sha256_text(provider_name)
            inputs["strict_json"] = sha256_text(str(strict_json))
            if is_current(out_dir, inputs):
                log.info("classify %s: up to date", model.model_id)
                continue

            for path in sorted(batch_dir.glob("*.jsonl")):
                if path.name.endswith(".results.jsonl"):
                    continue
                ngo_id = path.stem
                corpus = load_corpus(layout, ngo_id)
                lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln]
                state_path = batch_dir / f"{ngo_id}.state.json"
                state = (
                    json.loads(state_path.read_text(encoding="utf-8"))
                    if state_path.is_file()
                    else {}
                )
                save_state = lambda s: write_text(state_path, json.dumps(s))  # noqa: E731
                try:
                    raw_lines = provider.run_batch(lines, state=state, state_save=save_state)
                except ProviderError:
                    if state:
                        save_state(state)
                        log.error(
                            "classify %s/%s: provider failed; submission state saved, "
                            "re-run to resume",
                            model.model_id,
                            ngo_id,
                        )
                    raise
                state_path.unlink(missing_ok=True)
                results = providers_mod.parse_result_lines(raw_lines)
                verdicts = providers_mod.join_verdicts(
                    corpus, results, model.model_id, strict_json=strict_json
                )
                write_text(
                    batch_dir / f"{ngo_id}.results.jsonl",
                    "\n".join(raw_lines) + ("\n" if raw_lines else ""),
                )
                write_jsonl(out_dir / f"{ngo_id}.jsonl", (v.to_dict() for v in verdicts))
                n_malformed = sum(v.label == "malformed" for v in verdicts)
                log.info(
                    "classify %s/%s: %d verdicts, %d malformed",
                    model.model_id,
                    ngo_id,
                    len(verdicts),
                    n_malformed,
                )
            write_manifest(
                out_dir,
                "classify",
                inputs,
                {
                    "provider": provider_name,
                    "model_id": model.model_id,
                    "template": config.prompt_template,
                    "prompt_sha256": prompt_hash(config.prompt_template),
                    "strict_json": strict_json,
                    # No decoding parameters are sent; the provider's own
                    # defaults apply and that fact is the record.
                    "decoding": "provider-defaults",
                },
                started,
            )


# --- analyze ----------------------------------------------------------------


def _load_tree_results(layout: Layout) -> list[MatchResult]:
    results = []
    for path in sorted(layout.labels_tree.glob("*.jsonl")):
        for row in read_jsonl(path):
            results.append(
                MatchResult(
                    sentence_id=row["sentence_id"],
                    matches=tuple(
                        Match(m["variant"], tuple(m["path"]), tuple(m["span"]))
                        for m in row.get("matches", [])
                    ),
                    match_count=int(row["match_count"]),
                    label=row["label"],
                )
            )
    return results


def _load_verdicts(layout: Layout, model_id: str) -> list[Verdict]:
    verdicts = []
    for path in sorted(layout.labels_model(model_id).glob("*.jsonl")):
        verdicts.extend(Verdict.from_dict(row) for row in read_jsonl(path))
    return verdicts


def run_analyze(config: PipelineConfig, tree_only: bool = False) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        _require_manifest(layout.labels_tree, "match")
        model_ids = [] if tree_only else [m.model_id for m in config.models]
        for model_id in model_ids:
            if read_manifest(layout.labels_model(model_id)) is None:
                raise PrerequisiteError(
                    f"no verdicts for model {model_id!r}; run `sacreddetect classify` "
                    "first (or pass --tree-only)"
                )
        started = datetime.now(timezone.utc).isoformat()
        inputs = {f"tree/{k}": v for k, v in _hash_dir_files(layout.labels_tree).items()}
        inputs.update(
            {f"corpus/{k}": v for k, v in _hash_dir_files(layout.corpus).items()}
        )
        for model_id in model_ids:
            inputs.update(
                {
                    f"{model_id}/{k}": v
                    for k, v in _hash_dir_files(layout.labels_model(model_id)).items()
                }
            )
        if is_current(layout.analysis, inputs):
            log.info("analyze: up to date")
            return

        corpus = load_corpus(layout)
        tree_results = _load_tree_results(layout)
        verdict_sets = {}
        argumentation: dict[str, dict[str, str]] = {}
        for model_id in model_ids:
            verdicts = _load_verdicts(layout, model_id)
            verdict_sets[model_id] = {v.sentence_id: v.label for v in verdicts}
            argumentation[model_id] = {
                v.sentence_id: v.argumentation
                for v in verdicts
                if v.argumentation is not None
            }

        matrix = matrix_mod.tabulate(corpus, tree_results, verdict_sets, config.groups())
        rates = group_rates(matrix)
        agreement = pairwise_agreement(matrix)
        ratios = disagreement_ratios(matrix) if len(model_ids) >= 2 else None
        terms = [
            term_report(corpus, matrix, phrase, argumentation)
            for phrase in config.report_phrases
        ]
        consistency = duplicate_consistency(corpus, matrix)
        summary = _read_summary_csv(layout.corpus / "summary.csv")

        bundle = reports_mod.stats_bundle(
            summary, rates, agreement, ratios, terms, consistency, provenance=inputs
        )
        write_json(layout.analysis / "stats.json", bundle)
        write_manifest(layout.analysis, "analyze", inputs, {"models": model_ids}, started)
        log.info("analyze: %d rows, %d classifiers", len(matrix.rows), len(matrix.classifiers))


def _read_summary_csv(path: Path) -> list[dict]:
    if not path.is_file():
        return []
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            {
                "ngo_id": row["ngo_id"],
                "group": row["group"],
                "n_documents": int(row["n_documents"]),
                "n_sentences": int(row["n_sentences"]),
            }
            for row in csv.DictReader(fh)
        ]


# --- report -----------------------------------------------------------------


def run_report(config: PipelineConfig) -> None:
    layout = Layout(config.output_root)
    with stage_lock(layout.root):
        _require_manifest(layout.analysis, "analyze")
        started = datetime.now(timezone.utc).isoformat()
        stats_path = layout.analysis / "stats.json"
        inputs = {"stats.json": sha256_file(stats_path)}
        if is_current(layout.reports, inputs):
            log.info("report: up to date")
            return
        bundle = json.loads(stats_path.read_text(encoding="utf-8"))
        written = reports_mod.render_from_bundle(layout.reports, bundle)
        write_manifest(layout.reports, "report", inputs, {}, started)
        log.info("report: wrote %d files", len(written))
