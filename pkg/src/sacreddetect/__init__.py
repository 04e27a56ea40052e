"""Religious-language detection pipeline for NGO climate discourse.

Stages: harvest web-archive-indexed pages, extract and sentence-split the
text, match sentences against a hierarchical lexicon of religious concepts,
classify the same sentences with LLM judges (or a deterministic stub), and
compute comparative agreement statistics and reports.
"""

__version__ = "0.1.0"
