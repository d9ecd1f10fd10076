"""Run configuration: fusion weights, thresholds, provider wiring.

Precedence: built-in defaults < JSON config file < CITEAUDIT_* environment
variables. Credentials are environment-only (CITEAUDIT_KEY_<PROVIDER>) and
never appear in config files or report snapshots.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import ConfigError

DEFAULT_TAU = 17.0
DEFAULT_CACHE_TTL = 7 * 24 * 3600


@dataclass(frozen=True)
class ProviderSetting:
    name: str
    role: str  # "primary-metadata" | "abstract-tier-N" | "retraction"
    base_url: str | None = None
    rate_limit: float = 10.0  # requests per second
    enabled: bool = True


# Tier 4 (publisher page scraping) ships disabled: it is the least reliable
# source and needs explicit opt-in.
DEFAULT_PROVIDERS: tuple[ProviderSetting, ...] = (
    ProviderSetting("openalex", "primary-metadata", "https://api.openalex.org/works"),
    ProviderSetting(
        "semantic-scholar",
        "abstract-tier-1",
        "https://api.semanticscholar.org/graph/v1/paper/search",
    ),
    ProviderSetting("crossref", "abstract-tier-2", "https://api.crossref.org/works"),
    ProviderSetting("arxiv", "abstract-tier-3", "https://export.arxiv.org/api/query"),
    ProviderSetting("publisher-page", "abstract-tier-4", None, enabled=False),
)


@dataclass(frozen=True)
class RunConfig:
    stub_mode: bool = True
    db_path: str = "citeaudit.db"
    fixtures_dir: str | None = None  # None -> bundled corpus fixtures

    w_llm: float = 0.6
    w_embed: float = 0.4
    tau_default: float = DEFAULT_TAU

    title_similarity_threshold: float = 0.85
    year_tolerance: int = 1
    author_match_threshold: float = 0.90
    suggestion_duplicate_threshold: float = 0.85
    recency_window_years: int = 5

    worker_cap: int = 4
    cache_ttl_seconds: int = DEFAULT_CACHE_TTL
    judgment_batch_size: int = 8

    providers: tuple[ProviderSetting, ...] = DEFAULT_PROVIDERS
    judgment_url: str | None = None
    embedding_url: str | None = None
    suggestion_url: str | None = None

    def snapshot(self) -> dict:
        """Provenance block embedded in every report. No credentials."""
        return {
            "stub_mode": self.stub_mode,
            "fusion_weights": {"w_llm": self.w_llm, "w_embed": self.w_embed},
            "tau_default": self.tau_default,
            "title_similarity_threshold": self.title_similarity_threshold,
            "year_tolerance": self.year_tolerance,
            "author_match_threshold": self.author_match_threshold,
            "suggestion_duplicate_threshold": self.suggestion_duplicate_threshold,
            "recency_window_years": self.recency_window_years,
            "providers": [
                {"name": p.name, "role": p.role, "enabled": p.enabled} for p in self.providers
            ],
        }


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def validate_config(config: RunConfig) -> RunConfig:
    _check(config.w_llm >= 0.0 and config.w_embed >= 0.0, "fusion weights must be non-negative")
    _check(
        abs(config.w_llm + config.w_embed - 1.0) < 1e-9,
        f"fusion weights must sum to 1, got {config.w_llm} + {config.w_embed}",
    )
    _check(0.0 <= config.tau_default <= 100.0, "tau_default must lie in [0, 100]")
    for name in (
        "title_similarity_threshold",
        "author_match_threshold",
        "suggestion_duplicate_threshold",
    ):
        value = getattr(config, name)
        _check(0.0 <= value <= 1.0, f"{name} must lie in [0, 1], got {value}")
    _check(config.year_tolerance >= 0, "year_tolerance must be >= 0")
    _check(config.recency_window_years >= 1, "recency_window_years must be >= 1")
    _check(1 <= config.worker_cap <= 32, "worker_cap must lie in [1, 32]")
    _check(config.cache_ttl_seconds >= 0, "cache_ttl_seconds must be >= 0")
    _check(config.judgment_batch_size >= 1, "judgment_batch_size must be >= 1")

    primaries = [p for p in config.providers if p.role == "primary-metadata"]
    _check(len(primaries) == 1, "exactly one primary-metadata provider is required")
    tiers = []
    for p in config.providers:
        if p.role.startswith("abstract-tier-"):
            suffix = p.role.removeprefix("abstract-tier-")
            _check(suffix.isdigit(), f"malformed provider role: {p.role}")
            tiers.append(int(suffix))
    _check(len(set(tiers)) == len(tiers), "duplicate abstract tier numbers")
    _check(all(1 <= t <= 4 for t in tiers), "abstract tiers must be numbered 1 through 4")
    if config.stub_mode:
        # Stub mode must never touch the network, so remote endpoints are
        # contradictory rather than merely unused.
        _check(
            config.judgment_url is None
            and config.embedding_url is None
            and config.suggestion_url is None,
            "stub_mode forbids remote judgment/embedding/suggestion endpoints",
        )
    return config


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _parse_bool(raw: str, source: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _BOOL_TRUE:
        return True
    if lowered in _BOOL_FALSE:
        return False
    raise ConfigError(f"{source}: expected a boolean, got {raw!r}")


def _parse_number(raw: str, source: str, cast):
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"{source}: expected a number, got {raw!r}") from None


_FILE_KEYS = {
    "stub_mode": bool,
    "db_path": str,
    "fixtures_dir": str,
    "w_llm": float,
    "w_embed": float,
    "tau_default": float,
    "title_similarity_threshold": float,
    "year_tolerance": int,
    "author_match_threshold": float,
    "suggestion_duplicate_threshold": float,
    "recency_window_years": int,
    "worker_cap": int,
    "cache_ttl_seconds": int,
    "judgment_batch_size": int,
    "judgment_url": str,
    "embedding_url": str,
    "suggestion_url": str,
}


def _apply_file(config: RunConfig, path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")

    updates: dict = {}
    for key, value in raw.items():
        if key == "providers":
            updates["providers"] = _parse_providers(value)
            continue
        if key not in _FILE_KEYS:
            raise ConfigError(f"unknown config key: {key}")
        expected = _FILE_KEYS[key]
        if expected is bool:
            if not isinstance(value, bool):
                raise ConfigError(f"{key}: expected a boolean")
        elif expected is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key}: expected a number")
            value = float(value)
        elif expected is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{key}: expected an integer")
        elif expected is str:
            if value is not None and not isinstance(value, str):
                raise ConfigError(f"{key}: expected a string")
        updates[key] = value
    return replace(config, **updates)


def _parse_providers(raw) -> tuple[ProviderSetting, ...]:
    if not isinstance(raw, list):
        raise ConfigError("providers: expected a list")
    settings = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ConfigError(f"providers[{i}]: expected an object")
        name = entry.get("name")
        role = entry.get("role")
        if not isinstance(name, str) or not name:
            raise ConfigError(f"providers[{i}].name: expected a non-empty string")
        if not isinstance(role, str) or not role:
            raise ConfigError(f"providers[{i}].role: expected a non-empty string")
        base_url = entry.get("base_url")
        if base_url is not None and not isinstance(base_url, str):
            raise ConfigError(f"providers[{i}].base_url: expected a string")
        rate_limit = entry.get("rate_limit", 10.0)
        if isinstance(rate_limit, bool) or not isinstance(rate_limit, (int, float)):
            raise ConfigError(f"providers[{i}].rate_limit: expected a number")
        enabled = entry.get("enabled", True)
        if not isinstance(enabled, bool):
            raise ConfigError(f"providers[{i}].enabled: expected a boolean")
        settings.append(ProviderSetting(name, role, base_url, float(rate_limit), enabled))
    return tuple(settings)


def _apply_env(config: RunConfig, env: Mapping[str, str]) -> RunConfig:
    updates: dict = {}
    if "CITEAUDIT_STUB_MODE" in env:
        updates["stub_mode"] = _parse_bool(env["CITEAUDIT_STUB_MODE"], "CITEAUDIT_STUB_MODE")
    if "CITEAUDIT_DB" in env:
        updates["db_path"] = env["CITEAUDIT_DB"]
    if "CITEAUDIT_FIXTURES_DIR" in env:
        updates["fixtures_dir"] = env["CITEAUDIT_FIXTURES_DIR"]
    if "CITEAUDIT_TAU" in env:
        updates["tau_default"] = _parse_number(env["CITEAUDIT_TAU"], "CITEAUDIT_TAU", float)
    if "CITEAUDIT_WORKERS" in env:
        updates["worker_cap"] = _parse_number(env["CITEAUDIT_WORKERS"], "CITEAUDIT_WORKERS", int)
    if "CITEAUDIT_CACHE_TTL" in env:
        updates["cache_ttl_seconds"] = _parse_number(
            env["CITEAUDIT_CACHE_TTL"], "CITEAUDIT_CACHE_TTL", int
        )
    return replace(config, **updates) if updates else config


def provider_credential(name: str, env: Mapping[str, str] | None = None) -> str | None:
    env = os.environ if env is None else env
    key = "CITEAUDIT_KEY_" + name.upper().replace("-", "_")
    return env.get(key)


def load_config(
    path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    **overrides,
) -> RunConfig:
    env = os.environ if env is None else env
    config = RunConfig()
    file_path = path or env.get("CITEAUDIT_CONFIG")
    if file_path:
        config = _apply_file(config, file_path)
    config = _apply_env(config, env)
    if overrides:
        config = replace(config, **overrides)
    return validate_config(config)
