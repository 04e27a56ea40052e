"""Independent reference implementations used to check the real ones.

These deliberately use different mechanisms than the package: per-variant
regex scans instead of the multi-pattern automaton, and plain row-by-row
recounts instead of the vectorized-ish stats code. They must stay dumb.
"""

from __future__ import annotations

import math
import re
from collections import Counter

VALID = ("yes", "no")


# --- matcher oracle ---------------------------------------------------------


def _variant_regex(variant: str) -> re.Pattern:
    # Boundary = non-alphanumeric or edge; [^\W_] is "alphanumeric" in re terms.
    words = [re.escape(w) for w in variant.split()]
    body = r"\s+".join(words)
    return re.compile(rf"(?<![^\W_]){body}(?![^\W_])", re.IGNORECASE | re.UNICODE)


def naive_match_spans(text: str, variants: list[str], exclusions: list[str]) -> set[tuple[str, int, int]]:
    """All surviving (variant, start, end) triples by brute-force scanning."""
    exclusion_spans = []
    for form in exclusions:
        for m in _variant_regex(form).finditer(text):
            exclusion_spans.append((m.start(), m.end()))
    out = set()
    for variant in variants:
        for m in _variant_regex(variant).finditer(text):
            s, e = m.start(), m.end()
            if any(xs <= s and e <= xe for xs, xe in exclusion_spans):
                continue
            out.add((variant, s, e))
    return out


def naive_label(text: str, variants: list[str], exclusions: list[str]) -> str:
    return "yes" if naive_match_spans(text, variants, exclusions) else "no"


# --- stats oracles ----------------------------------------------------------
# Rows are plain dicts: {"ngo": ..., "group": ..., "labels": {classifier: label}}


def scope_rows(rows: list[dict]) -> dict[str, list[dict]]:
    scopes: dict[str, list[dict]] = {}
    for row in rows:
        scopes.setdefault(row["ngo"], []).append(row)
    secular = [r for r in rows if r["group"] == "secular"]
    religious = [r for r in rows if r["group"] == "religious"]
    if secular:
        scopes["secular_total"] = secular
    if religious:
        scopes["religious_total"] = religious
    scopes["total"] = list(rows)
    return scopes


def naive_rates(rows: list[dict], classifiers: list[str]) -> dict:
    out = {}
    for scope, members in scope_rows(rows).items():
        for c in classifiers:
            yes = no = malformed = 0
            for row in members:
                lbl = row["labels"][c]
                if lbl == "yes":
                    yes += 1
                elif lbl == "no":
                    no += 1
                else:
                    malformed += 1
            out[(c, scope)] = {
                "n": len(members),
                "n_yes": yes,
                "n_no": no,
                "n_malformed": malformed,
                "pct_yes": 100.0 * yes / len(members),
                "pct_no": 100.0 * no / len(members),
            }
    return out


def naive_agreement(rows: list[dict], classifiers: list[str]) -> dict:
    pairs = [
        (classifiers[i], classifiers[j])
        for i in range(len(classifiers))
        for j in range(i + 1, len(classifiers))
    ]
    out = {"pairwise": {}, "overall": {}}
    for scope, members in scope_rows(rows).items():
        n = len(members)
        for a, b in pairs:
            hits = 0
            for row in members:
                la, lb = row["labels"][a], row["labels"][b]
                if la in VALID and lb in VALID and la == lb:
                    hits += 1
            out["pairwise"][(a, b, scope)] = 100.0 * hits / n
        all_agree = 0
        for row in members:
            labels = [row["labels"][c] for c in classifiers]
            if labels[0] in VALID and all(lbl == labels[0] for lbl in labels):
                all_agree += 1
        out["overall"][scope] = 100.0 * all_agree / n
    return out


def naive_ratios(rows: list[dict], a: str, b: str) -> dict:
    out = {}
    for scope, members in scope_rows(rows).items():
        subset = []
        for row in members:
            la, lb = row["labels"][a], row["labels"][b]
            if la != lb or la not in VALID or lb not in VALID:
                subset.append(row)
        for model in (a, b):
            counts = Counter(row["labels"][model] for row in subset)
            yes, no = counts.get("yes", 0), counts.get("no", 0)
            if no == 0:
                ratio = math.nan if yes == 0 else math.inf
            else:
                ratio = yes / no
            out[(model, scope)] = {
                "n_yes": yes,
                "n_no": no,
                "n_malformed_self": counts.get("malformed", 0),
                "n_disagreements": len(subset),
                "ratio": ratio,
            }
    return out
