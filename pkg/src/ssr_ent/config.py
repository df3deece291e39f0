"""
Configuration for ssr-ent.

Settings come from built-in defaults, deep-merged with an optional YAML file
(``config/ssr_ent.yaml`` or ``$SSR_ENT_CONFIG``). ``$SSR_ENT_TOLERANCE``
overrides the majorization tolerance.
"""

import copy
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("config/ssr_ent.yaml")
TOLERANCE_ENV = "SSR_ENT_TOLERANCE"
CONFIG_ENV = "SSR_ENT_CONFIG"

DEFAULT_CONFIG: Dict[str, Any] = {
    "tolerances": {
        "hermitian": 1e-10,
        "trace": 1e-10,
        "psd": 1e-10,
        "eigen": 1e-10,
        "majorization": 1e-9,
        "total": 1e-9,
        "chi": 1e-9,
        "weight": 1e-9,
        "purity": 1e-9,
    },
    "analysis": {
        "ssr": "parity",
        "keep_party": None,
    },
    "search": {
        "grid_step": 0.05,
        "phase_steps": 1,
        "max_workers": 1,
        "collect_all": False,
    },
    "logging": {
        "level": "WARNING",
    },
}


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances used across the package."""

    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    eigen: float = 1e-10
    majorization: float = 1e-9
    total: float = 1e-9
    chi: float = 1e-9
    weight: float = 1e-9
    purity: float = 1e-9

    @classmethod
    def from_mapping(cls, values: Dict[str, Any]) -> "Tolerances":
        known = {k: float(v) for k, v in values.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass(frozen=True)
class Settings:
    """Resolved configuration."""

    tolerances: Tolerances = field(default_factory=Tolerances)
    ssr: str = "parity"
    keep_party: Optional[str] = None
    grid_step: float = 0.05
    phase_steps: int = 1
    max_workers: int = 1
    collect_all: bool = False
    log_level: str = "WARNING"


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _tolerance_override() -> Optional[float]:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{TOLERANCE_ENV}={raw!r} is not a number")
    if value <= 0:
        raise ConfigError(f"{TOLERANCE_ENV} must be positive, got {value}")
    return value


def default_tolerances() -> Tolerances:
    """Built-in tolerances with the environment override applied."""
    override = _tolerance_override()
    if override is None:
        return Tolerances()
    return Tolerances(majorization=override)


def load_config(config_path: Optional[Union[str, Path]] = None) -> Settings:
    """Load settings from YAML, falling back to defaults when no file exists."""
    if config_path is None:
        config_path = os.environ.get(CONFIG_ENV) or DEFAULT_CONFIG_PATH
    path = Path(config_path)

    raw: Dict[str, Any] = {}
    if path.exists():
        try:
            with open(path) as f:
                raw = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML: {e}")
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        logger.debug(f"[CONFIG] Loaded {path}")
    else:
        logger.debug(f"[CONFIG] {path} not found, using defaults")

    config = _deep_merge(DEFAULT_CONFIG, raw)

    tolerances = dict(config["tolerances"])
    override = _tolerance_override()
    if override is not None:
        tolerances["majorization"] = override

    analysis = config["analysis"]
    search = config["search"]
    try:
        return Settings(
            tolerances=Tolerances.from_mapping(tolerances),
            ssr=str(analysis["ssr"]),
            keep_party=analysis.get("keep_party"),
            grid_step=float(search["grid_step"]),
            phase_steps=int(search["phase_steps"]),
            max_workers=int(search["max_workers"]),
            collect_all=bool(search["collect_all"]),
            log_level=str(config["logging"]["level"]).upper(),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}")
