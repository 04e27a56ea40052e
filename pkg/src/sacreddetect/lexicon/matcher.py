"""Single-pass multi-pattern sentence matching with word-boundary semantics.

The matcher compiles every lexicon variant (and every exclusion form) into
one Aho-Corasick automaton and scans a normalized view of the sentence --
case-folded, whitespace runs collapsed -- in a single pass, so matching a
sentence touches each character O(1) amortized times regardless of how many
variants the lexicon holds.

Semantics:

  * case-insensitive; multi-word variants match across whitespace runs
  * a hit counts only when bounded by non-alphanumeric characters or the
    string edges on both sides ("scared" never matches "sacred", and
    "bless" does not match inside "blessing"); hyphens are boundaries, so
    a single-word variant matches inside a hyphenated compound's segments
    while a multi-word variant still requires actual whitespace
  * overlapping hits from distinct variants are all reported; identical
    (variant, span) pairs are reported once -- a variant housed under
    several nodes reports the first node in tree document order
  * a variant hit whose span lies inside the span of an exclusion-form
    occurrence is suppressed

Spans refer to character offsets in the original sentence; the spanned
text, case-folded and space-normalized, equals the variant.

The compiled matcher is immutable and safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..textpipe.corpus import SentenceRecord
from .tree import Lexicon


@dataclass(frozen=True)
class Match:
    variant: str
    path: tuple[str, ...]
    span: tuple[int, int]  # [start, end) character offsets in the sentence


@dataclass(frozen=True)
class MatchResult:
    sentence_id: str
    matches: tuple[Match, ...]
    match_count: int
    label: str  # yes | no

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "label": self.label,
            "match_count": self.match_count,
            "matches": [
                {"variant": m.variant, "path": list(m.path), "span": list(m.span)}
                for m in self.matches
            ],
        }


@dataclass
class _Pattern:
    text: str
    paths: list[tuple[str, ...]] = field(default_factory=list)
    is_exclusion: bool = False

    @property
    def is_variant(self) -> bool:
        return bool(self.paths)


class _Node:
    __slots__ = ("children", "fail", "outputs")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.fail: _Node | None = None
        self.outputs: list[int] = []


class Matcher:
    def __init__(self, patterns: list[_Pattern]):
        self.patterns = patterns
        self._root = _Node()
        for pid, pattern in enumerate(patterns):
            node = self._root
            for ch in pattern.text:
                node = node.children.setdefault(ch, _Node())
            node.outputs.append(pid)
        self._build_failure_links()

    def _build_failure_links(self) -> None:
        root = self._root
        queue: deque[_Node] = deque()
        for child in root.children.values():
            child.fail = root
            queue.append(child)
        while queue:
            current = queue.popleft()
            for ch, child in current.children.items():
                fallback = current.fail
                while fallback is not root and ch not in fallback.children:
                    fallback = fallback.fail
                child.fail = fallback.children.get(ch, root)
                if child.fail is child:
                    child.fail = root
                child.outputs = child.outputs + child.fail.outputs
                queue.append(child)

    def scan(self, text: str) -> list[tuple[int, int, int]]:
        """All automaton hits over text as (pattern_id, start, end)."""
        root = self._root
        node = root
        hits = []
        for i, ch in enumerate(text):
            while node is not root and ch not in node.children:
                node = node.fail
            node = node.children.get(ch, root)
            for pid in node.outputs:
                end = i + 1
                hits.append((pid, end - len(self.patterns[pid].text), end))
        return hits

    @property
    def pattern_count(self) -> int:
        return len(self.patterns)


def compile_matcher(lexicon: Lexicon) -> Matcher:
    """Compile an immutable matcher from a validated lexicon."""
    by_text: dict[str, _Pattern] = {}
    for path, node in lexicon.walk():
        for variant in node.variants:
            by_text.setdefault(variant, _Pattern(text=variant)).paths.append(path)
    for form in lexicon.exclusions:
        pattern = by_text.setdefault(form, _Pattern(text=form))
        pattern.is_exclusion = True
    return Matcher(list(by_text.values()))


def _normalized_view(text: str) -> tuple[str, list[int], list[int]]:
    """Case-folded, space-collapsed view plus per-char original offsets.

    Returns (normalized, starts, ends) where normalized[i] originates from
    text[starts[i]:ends[i]]. Whitespace runs become a single space mapped
    to the run's first character.
    """
    chars: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    pending_space_at = -1
    for o, ch in enumerate(text):
        if ch.isspace():
            if pending_space_at < 0:
                pending_space_at = o
            continue
        if pending_space_at >= 0:
            if chars:  # leading whitespace is dropped, inner runs collapse
                chars.append(" ")
                starts.append(pending_space_at)
                ends.append(pending_space_at + 1)
            pending_space_at = -1
        for low in ch.lower():
            chars.append(low)
            starts.append(o)
            ends.append(o + 1)
    return "".join(chars), starts, ends


def _boundary_ok(norm: str, start: int, end: int) -> bool:
    before_ok = start == 0 or not norm[start - 1].isalnum()
    after_ok = end == len(norm) or not norm[end].isalnum()
    return before_ok and after_ok


def match_sentence(matcher: Matcher, text: str, sentence_id: str = "") -> MatchResult:
    """Match one sentence; label is yes iff at least one variant survives."""
    norm, starts, ends = _normalized_view(text)
    variant_hits: list[tuple[int, int, int]] = []
    exclusion_spans: list[tuple[int, int]] = []
    for pid, s, e in matcher.scan(norm):
        if not _boundary_ok(norm, s, e):
            continue
        pattern = matcher.patterns[pid]
        if pattern.is_exclusion:
            exclusion_spans.append((s, e))
        if pattern.is_variant:
            variant_hits.append((pid, s, e))

    matches = []
    for pid, s, e in variant_hits:
        if any(xs <= s and e <= xe for xs, xe in exclusion_spans):
            continue
        pattern = matcher.patterns[pid]
        span = (starts[s], ends[e - 1])
        matches.append(Match(variant=pattern.text, path=pattern.paths[0], span=span))
    matches.sort(key=lambda m: (m.span, m.variant))

    return MatchResult(
        sentence_id=sentence_id,
        matches=tuple(matches),
        match_count=len(matches),
        label="yes" if matches else "no",
    )


def classify_corpus(matcher: Matcher, corpus: list[SentenceRecord]) -> list[MatchResult]:
    """One MatchResult per sentence, in corpus order."""
    return [match_sentence(matcher, rec.text, rec.sentence_id) for rec in corpus]


def yes_rate_summary(corpus: list[SentenceRecord], results: list[MatchResult]) -> dict[str, dict]:
    """Per-NGO sentence counts and yes-rates for stage logs."""
    per_ngo: dict[str, dict] = {}
    for rec, res in zip(corpus, results):
        entry = per_ngo.setdefault(rec.ngo_id, {"n": 0, "yes": 0})
        entry["n"] += 1
        entry["yes"] += res.label == "yes"
    for entry in per_ngo.values():
        entry["pct_yes"] = 100.0 * entry["yes"] / entry["n"] if entry["n"] else 0.0
    return per_ngo
