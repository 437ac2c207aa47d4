"""Scoring configuration shared by the library and the CLI."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .baseline import BaselineMode
from .errors import ConfigError

CONFIG_ENV_VAR = "CITEMETRIC_CONFIG"


@dataclass(frozen=True)
class BootstrapConfig:
    n_resamples: int = 1000
    level: float = 0.95
    seed: int | None = None

    def __post_init__(self):
        if self.n_resamples < 1:
            raise ConfigError("bootstrap n_resamples must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ConfigError("bootstrap level must lie strictly between 0 and 1")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("bootstrap seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class ScoringConfig:
    baseline_mode: BaselineMode = BaselineMode.FIELD
    window_end: int | None = None
    min_pubs: int = 20
    expected_floor: float = 0.1
    ratio_flag: float = 5.0
    low_expected_flag: float = 1.0
    bootstrap: BootstrapConfig | None = None
    leave_one_out: bool = False
    delta: float = 0.5

    def __post_init__(self):
        try:
            object.__setattr__(self, "baseline_mode", BaselineMode(self.baseline_mode))
        except ValueError:
            raise ConfigError(f"unknown baseline_mode {self.baseline_mode!r}") from None
        if isinstance(self.bootstrap, dict):
            object.__setattr__(self, "bootstrap", BootstrapConfig(**self.bootstrap))
        if self.min_pubs < 1:
            raise ConfigError("min_pubs must be >= 1")
        if self.expected_floor < 0:
            raise ConfigError("expected_floor must be >= 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["baseline_mode"] = self.baseline_mode.value
        return d

    def with_overrides(self, **overrides) -> "ScoringConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_dict(cls, data: dict) -> "ScoringConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def load_config_file(path=None) -> ScoringConfig:
    """Read a JSON config file; falls back to ``$CITEMETRIC_CONFIG``, then defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return ScoringConfig()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return ScoringConfig.from_dict(data)


DEFAULTS = ScoringConfig()
DEFAULT_BOOTSTRAP = BootstrapConfig()
