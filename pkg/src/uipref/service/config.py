"""Service configuration: one declarative file, environment overrides.

Precedence: built-in defaults < YAML config file < UIPREF_* environment
variables < explicit CLI flags (applied by the CLI itself).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from ..errors import ValidationError


@dataclass
class ServiceConfig:
    store_root: str = "uipref-store"
    host: str = "127.0.0.1"
    port: int = 8000
    fsync: bool = True
    seed: int = 0
    viewport_width: int = 390
    viewport_height: int = 844
    scale_factor: float = 1.0
    top_k: int = 8
    embedding_dim: int = 512
    max_output_tokens: int = 4096

    def __post_init__(self):
        if self.viewport_width <= 0 or self.viewport_height <= 0:
            raise ValidationError("viewport dimensions must be positive")
        if self.scale_factor <= 0:
            raise ValidationError("scale factor must be positive")

    @property
    def viewport(self) -> tuple[int, int]:
        return (self.viewport_width, self.viewport_height)


def _coerce(value: str, target_type: type) -> object:
    if target_type is bool:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return target_type(value)


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    """Defaults, overlaid with the YAML file, overlaid with UIPREF_* env vars."""
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    if path is not None:
        loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(loaded, dict):
            raise ValidationError(f"config file {path} must hold a mapping")
        values.update(loaded)

    known = {f.name: f.type for f in fields(ServiceConfig)}
    unknown = set(values) - set(known)
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")

    types = {f.name: type(getattr(ServiceConfig(), f.name)) for f in fields(ServiceConfig)}
    for name in known:
        env_key = f"UIPREF_{name.upper()}"
        if env_key in env:
            values[name] = _coerce(env[env_key], types[name])
        elif name in values:
            values[name] = _coerce(str(values[name]), types[name]) if not isinstance(values[name], types[name]) else values[name]
    return ServiceConfig(**values)
