from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

import yaml
from easydict import EasyDict

from .errors import ConfigError

DEFAULTS_PATH = Path(__file__).with_name("defaults.yaml")


@lru_cache(maxsize=None)
def load_settings() -> EasyDict:
    """Packaged defaults (tolerances, default search space, cascade depth)."""
    with open(DEFAULTS_PATH, "r", encoding="utf-8") as f:
        return EasyDict(yaml.safe_load(f))


def resolve_workers(flag_value: int | None) -> int:
    """--workers wins, then BELLDISC_WORKERS, then 1. Zero means one per CPU."""
    value = flag_value
    if value is None:
        env_name = load_settings().workers_env
        raw = os.environ.get(env_name)
        if raw is None or raw.strip() == "":
            return 1
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{env_name} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"worker count must be >= 0, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value
