"""System prompt templates, golden-file enforced.

Two fixed prompts exist: the first general instruction, and the revised one
that adds the descriptive-use carve-out and worked examples. They are
stored verbatim as bundled text files; render_prompt returns the file
content byte-for-byte, and the test suite pins their hashes so any drift
fails loudly. Classifier output is only comparable across runs when the
instruction text is identical.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..hashing import sha256_text

TEMPLATE_IDS = ("general", "revised")


@lru_cache(maxsize=None)
def render_prompt(template_id: str) -> str:
    """Exact system text for a template id; raises KeyError on unknown ids."""
    if template_id not in TEMPLATE_IDS:
        raise KeyError(f"unknown prompt template {template_id!r}; known: {TEMPLATE_IDS}")
    path = resources.files("sacreddetect.judge").joinpath("data", f"{template_id}.txt")
    return path.read_text(encoding="utf-8").rstrip("\n")


def prompt_hash(template_id: str) -> str:
    return sha256_text(render_prompt(template_id))
