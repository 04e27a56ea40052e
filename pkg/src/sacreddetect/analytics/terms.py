"""Phrase reports: how each classifier labels sentences containing a phrase.

Phrase matching is case-insensitive, whitespace-normalized substring with
word boundaries at both ends -- "sacred earth" finds "Sacred  Earth" but
not "sacredearthy".
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textpipe.corpus import SentenceRecord
from .matrix import LabelMatrix


def phrase_in_text(text: str, phrase: str) -> bool:
    norm_text = " ".join(text.lower().split())
    norm_phrase = " ".join(phrase.lower().split())
    if not norm_phrase:
        return False
    start = 0
    while True:
        i = norm_text.find(norm_phrase, start)
        if i < 0:
            return False
        end = i + len(norm_phrase)
        before_ok = i == 0 or not norm_text[i - 1].isalnum()
        after_ok = end == len(norm_text) or not norm_text[end].isalnum()
        if before_ok and after_ok:
            return True
        start = i + 1


@dataclass
class TermReport:
    phrase: str
    n_sentences: int
    counts: dict[str, dict]  # classifier -> {n_yes, pct_yes}
    samples: list[dict]  # sentence text plus per-model argumentation excerpts


def term_report(
    corpus: list[SentenceRecord],
    matrix: LabelMatrix,
    phrase: str,
    argumentation: dict[str, dict[str, str]] | None = None,
    max_samples: int = 10,
) -> TermReport:
    """Counts and per-classifier yes-rates over sentences containing phrase.

    argumentation optionally maps model_id -> {sentence_id -> argumentation}
    so sample rows can quote the models' stated reasoning.
    """
    if not phrase.strip():
        raise ValueError("phrase must be non-empty")
    rows_by_id = {row.sentence_id: row for row in matrix.rows}
    hits = [
        (rec, rows_by_id[rec.sentence_id])
        for rec in corpus
        if rec.sentence_id in rows_by_id and phrase_in_text(rec.text, phrase)
    ]

    counts: dict[str, dict] = {}
    for classifier in matrix.classifiers:
        n_yes = sum(row.label(classifier, matrix.model_ids) == "yes" for _, row in hits)
        counts[classifier] = {
            "n_yes": n_yes,
            "pct_yes": 100.0 * n_yes / len(hits) if hits else 0.0,
        }

    samples = []
    for rec, row in hits[:max_samples]:
        sample = {"sentence_id": rec.sentence_id, "ngo_id": rec.ngo_id, "text": rec.text}
        labels = {"tree": row.tree}
        for model_id in matrix.model_ids:
            labels[model_id] = row.label(model_id, matrix.model_ids)
            if argumentation and rec.sentence_id in argumentation.get(model_id, {}):
                sample[f"argumentation:{model_id}"] = argumentation[model_id][rec.sentence_id]
        sample["labels"] = labels
        samples.append(sample)

    return TermReport(
        phrase=phrase, n_sentences=len(hits), counts=counts, samples=samples
    )
