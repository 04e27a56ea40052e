"""Pipeline configuration: sources, models, fetch policy and paths.

The configuration file is TOML (see tomlcfg for the supported subset).
Relative paths are resolved against the config file's directory. The
bundled default configuration covers the nine NGOs of the study corpus
with the 2014-2024 harvest range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import tomlcfg
from .errors import ConfigError

GROUPS = ("religious", "secular")
PROVIDERS = ("openai-batch", "groq-batch", "stub")
TEMPLATE_IDS = ("general", "revised")

DEFAULT_REPORT_PHRASES = ("mother earth", "sacred earth", "ubuntu")


@dataclass(frozen=True)
class SourceSpec:
    """One NGO to harvest: scheme-less base URL plus a year range."""

    ngo_id: str
    group: str
    base_url: str
    from_year: int
    to_year: int

    def validate(self, where: str = "source") -> None:
        if not self.ngo_id:
            raise ConfigError(f"{where}.ngo_id: must be non-empty")
        if self.group not in GROUPS:
            raise ConfigError(
                f"{where}.group: {self.group!r} is not one of {'/'.join(GROUPS)}"
            )
        if "://" in self.base_url or not self.base_url:
            raise ConfigError(
                f"{where}.base_url: {self.base_url!r} must be host-relative "
                "(no scheme prefix)"
            )
        if self.from_year > self.to_year:
            raise ConfigError(
                f"{where}.from_year: {self.from_year} exceeds to_year {self.to_year}"
            )


@dataclass(frozen=True)
class ModelSpec:
    model_id: str
    provider: str

    def validate(self, where: str = "model") -> None:
        if not self.model_id:
            raise ConfigError(f"{where}.model_id: must be non-empty")
        if self.provider not in PROVIDERS:
            raise ConfigError(
                f"{where}.provider: {self.provider!r} is not one of {'/'.join(PROVIDERS)}"
            )


@dataclass(frozen=True)
class FetchPolicy:
    """Politeness knobs for live fetching."""

    rate_per_host: float = 1.0  # max requests per second per host
    retries: int = 3
    timeout: float = 20.0
    backoff: float = 2.0  # exponential base for retry delays

    def validate(self) -> None:
        if self.rate_per_host <= 0:
            raise ConfigError("policy.rate_per_host: must be > 0")
        if self.retries < 0:
            raise ConfigError("policy.retries: must be >= 0")
        if self.timeout <= 0:
            raise ConfigError("policy.timeout: must be > 0")


@dataclass
class PipelineConfig:
    sources: list[SourceSpec]
    models: list[ModelSpec]
    policy: FetchPolicy
    lexicon_path: Path
    prompt_template: str
    output_root: Path
    report_phrases: tuple[str, ...] = DEFAULT_REPORT_PHRASES

    def groups(self) -> dict[str, str]:
        return {s.ngo_id: s.group for s in self.sources}

    def source(self, ngo_id: str) -> SourceSpec:
        for s in self.sources:
            if s.ngo_id == ngo_id:
                return s
        raise KeyError(ngo_id)


def bundled_path(name: str) -> Path:
    """Path of a bundled data file (starter lexicon, default configs)."""
    return Path(str(resources.files("sacreddetect").joinpath("data", name)))


def default_config_path() -> Path:
    return bundled_path("default.toml")


def sample_config_path() -> Path:
    return bundled_path("sample.toml")


def validate_config(path: str | Path, tree_only: bool = False) -> PipelineConfig:
    """Parse and invariant-check a configuration file.

    Raises ConfigError naming the offending field path.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = tomlcfg.load(str(path))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent

    sources = []
    for i, entry in enumerate(_expect_list(raw, "sources")):
        where = f"sources[{i}]"
        spec = SourceSpec(
            ngo_id=_expect(entry, "ngo_id", str, where),
            group=_expect(entry, "group", str, where),
            base_url=_expect(entry, "base_url", str, where),
            from_year=_expect(entry, "from_year", int, where),
            to_year=_expect(entry, "to_year", int, where),
        )
        spec.validate(where)
        sources.append(spec)
    if not sources:
        raise ConfigError("sources: at least one source is required")
    seen: set[str] = set()
    for i, s in enumerate(sources):
        if s.ngo_id in seen:
            raise ConfigError(f"sources[{i}].ngo_id: duplicate id {s.ngo_id!r}")
        seen.add(s.ngo_id)

    models = []
    for i, entry in enumerate(raw.get("models", []) or []):
        where = f"models[{i}]"
        spec = ModelSpec(
            model_id=_expect(entry, "model_id", str, where),
            provider=_expect(entry, "provider", str, where),
        )
        spec.validate(where)
        models.append(spec)
    if not models and not tree_only:
        raise ConfigError(
            "models: configure at least one model, or pass --tree-only to run "
            "the rule-based classifier alone"
        )
    model_ids = [m.model_id for m in models]
    if len(set(model_ids)) != len(model_ids):
        raise ConfigError("models: duplicate model_id")

    pol = raw.get("policy", {}) or {}
    policy = FetchPolicy(
        rate_per_host=float(pol.get("rate_per_host", 1.0)),
        retries=int(pol.get("retries", 3)),
        timeout=float(pol.get("timeout", 20.0)),
        backoff=float(pol.get("backoff", 2.0)),
    )
    policy.validate()

    lexicon_raw = raw.get("lexicon", "starter")
    if lexicon_raw == "starter":
        lexicon_path = bundled_path("starter.tree")
    else:
        lexicon_path = (base / lexicon_raw).resolve()
    if not lexicon_path.is_file():
        raise ConfigError(f"lexicon: file not found: {lexicon_path}")

    template = raw.get("prompt_template", "revised")
    if template not in TEMPLATE_IDS:
        raise ConfigError(
            f"prompt_template: {template!r} is not one of {'/'.join(TEMPLATE_IDS)}"
        )

    output_root = Path(raw.get("output_root", "runs/default"))
    if not output_root.is_absolute():
        output_root = (base / output_root).resolve()

    report = raw.get("report", {}) or {}
    phrases = tuple(report.get("phrases", DEFAULT_REPORT_PHRASES))
    for p in phrases:
        if not str(p).strip():
            raise ConfigError("report.phrases: phrases must be non-empty")

    return PipelineConfig(
        sources=sources,
        models=models,
        policy=policy,
        lexicon_path=lexicon_path,
        prompt_template=template,
        output_root=output_root,
        report_phrases=phrases,
    )


def _expect_list(raw: dict, key: str) -> list:
    value = raw.get(key, [])
    if not isinstance(value, list):
        raise ConfigError(f"{key}: expected an array of tables")
    return value


def _expect(entry: dict, key: str, typ: type, where: str):
    if key not in entry:
        raise ConfigError(f"{where}.{key}: missing")
    value = entry[key]
    if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
        raise ConfigError(f"{where}.{key}: expected {typ.__name__}, got {value!r}")
    return value
