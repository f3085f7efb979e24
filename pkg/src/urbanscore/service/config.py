"""Application configuration: one JSON document, env overrides, typed sections.

Environment variables override file values with the ``URBANSCORE_`` prefix and
double-underscore section nesting, e.g. ``URBANSCORE_SERVICE__PORT=9000`` or
``URBANSCORE_PROVIDERS__FIXTURES_DIR=fixtures``. Values are parsed as JSON when
possible, otherwise taken as strings.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..geodata.facilities import HIGH_SCHOOL_KEYWORDS
from ..resilience.backoff import BackoffPolicy
from ..resilience.breaker import BreakerPolicy
from ..resilience.cache import CachePolicy
from ..scoring.calibration import CalibrationConstants, PollutantModel

ENV_PREFIX = "URBANSCORE_"


@dataclass(frozen=True)
class ProviderSettings:
    mode: str = "fixture"  # "fixture" | "http"
    fixtures_dir: str = "fixtures"
    base_urls: dict = field(default_factory=dict)
    api_keys: dict = field(default_factory=dict)
    timeout_s: float = 10.0


@dataclass(frozen=True)
class StorageSettings:
    backend: str = "sqlite"  # "sqlite" (embedded file) | "sql" (relational URL)
    path: str = "urbanscore.db"
    url: str | None = None


@dataclass(frozen=True)
class ExplainSettings:
    remote_url: str | None = None  # absent -> template-only, fully offline
    api_key: str | None = None
    model: str = "gpt-4o-mini"
    cache_ttl_s: float = 24 * 3600.0


@dataclass(frozen=True)
class ServiceSettings:
    port: int = 8000
    default_radius_m: int = 800
    io_threads: int = 32
    locale: str = "ro"
    cors_origins: tuple = ("*",)  # bearer-token clients carry no cookies


@dataclass(frozen=True)
class AppConfig:
    providers: ProviderSettings = field(default_factory=ProviderSettings)
    storage: StorageSettings = field(default_factory=StorageSettings)
    explain: ExplainSettings = field(default_factory=ExplainSettings)
    service: ServiceSettings = field(default_factory=ServiceSettings)
    cache: CachePolicy = field(default_factory=CachePolicy)
    backoff: BackoffPolicy = field(default_factory=BackoffPolicy)
    breaker: BreakerPolicy = field(default_factory=BreakerPolicy)
    calibration: CalibrationConstants = field(default_factory=CalibrationConstants)
    pollutants: PollutantModel = field(default_factory=PollutantModel)
    education_keywords: tuple[str, ...] = HIGH_SCHOOL_KEYWORDS

    def to_dict(self) -> dict:
        return {
            "providers": asdict(self.providers),
            "storage": asdict(self.storage),
            "explain": asdict(self.explain),
            "service": asdict(self.service),
            "cache": asdict(self.cache),
            "backoff": asdict(self.backoff),
            "breaker": asdict(self.breaker),
            "calibration": self.calibration.to_dict(),
            "pollutants": self.pollutants.to_dict(),
            "education_keywords": list(self.education_keywords),
        }


_SECTIONS = {
    "providers": ProviderSettings,
    "storage": StorageSettings,
    "explain": ExplainSettings,
    "service": ServiceSettings,
    "cache": CachePolicy,
    "backoff": BackoffPolicy,
    "breaker": BreakerPolicy,
}


def config_from_dict(raw: dict) -> AppConfig:
    kwargs = {}
    for name, cls in _SECTIONS.items():
        section = dict(raw.get(name) or {})
        allowed = {f.name for f in fields(cls)}
        unknown = set(section) - allowed
        if unknown:
            raise ValueError(f"unknown keys in config section '{name}': {sorted(unknown)}")
        kwargs[name] = cls(**section)
    if "calibration" in raw:
        kwargs["calibration"] = CalibrationConstants.from_dict(raw["calibration"])
    if "pollutants" in raw:
        kwargs["pollutants"] = PollutantModel.from_dict(raw["pollutants"])
    if "education_keywords" in raw:
        kwargs["education_keywords"] = tuple(raw["education_keywords"])
    return AppConfig(**kwargs)


def _parse_env_value(raw: str):
    try:
        return json.loads(raw)
    except (ValueError, TypeError):
        return raw


def apply_env_overrides(raw: dict, env: dict | None = None) -> dict:
    env = os.environ if env is None else env
    for key, value in env.items():
        if not key.startswith(ENV_PREFIX) or "__" not in key:
            continue
        section, _, field_name = key[len(ENV_PREFIX):].partition("__")
        section, field_name = section.lower(), field_name.lower()
        raw.setdefault(section, {})
        raw[section][field_name] = _parse_env_value(value)
    return raw


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    """Read the config document (if any) and fold in environment overrides."""
    env = os.environ if env is None else env
    if path is None:
        path = env.get(f"{ENV_PREFIX}CONFIG")
    raw: dict = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    raw = apply_env_overrides(raw, env)
    return config_from_dict(raw)


def write_config(config: AppConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
