"""
Experiment configuration.

Values come from dataclass defaults, then an optional JSON file, then CLI
flags; later sources win. Every validation failure raises ConfigError naming
the field.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional

from src.dynamics.floquet import default_steps
from src.linalg.errors import ConfigError
from src.sampling.random_states import UINT64_MAX

logger = logging.getLogger(__name__)

MODES = ("random", "floquet", "permutation", "classical", "mp-grid", "fit")
SEQUENCE_MODES = ("random", "floquet", "permutation", "classical")
FORMATS = ("csv", "json")
PERMUTATION_PRESETS = ("identity", "random")
MIN_BINS = 10


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    dim: Optional[int] = None
    tau: Optional[float] = None
    steps: Optional[int] = None
    trials: int = 1
    seed: int = 0
    bins: int = 50
    kick: float = 6.0
    rot: float = 1.0
    start: int = 0
    out: Optional[str] = None
    format: str = "csv"
    jobs: int = 1
    permutation: str = "random"
    spectrum: Optional[str] = None
    initial: Optional[str] = None
    tau_points: int = 150
    x_points: int = 400

    @property
    def output_path(self) -> str:
        return self.out or os.path.join("results", f"{self.mode}.{self.format}")

    def resolved_steps(self) -> int:
        """K, either given directly or ceil(tau·N)."""
        if self.steps is not None:
            return self.steps
        if self.tau is None or self.dim is None:
            raise ConfigError("tau", "either tau or steps is required for this mode")
        return default_steps(self.tau, self.dim)

    def echo(self) -> Dict[str, Any]:
        """Every field that can change results; `jobs` is left out since it cannot."""
        values = asdict(self)
        values.pop("jobs")
        return dict(sorted(values.items()))


_INT_FIELDS = {"dim", "steps", "trials", "seed", "bins", "start", "jobs", "tau_points", "x_points"}
_FLOAT_FIELDS = {"tau", "kick", "rot"}
_FIELD_NAMES = {item.name for item in fields(ExperimentConfig)}


def _coerce(name: str, value: Any) -> Any:
    if value is None:
        return None
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(name, f"must be an integer, got {value!r}")
        return int(value)
    if name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(name, f"must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(name, f"must be a string, got {value!r}")
    return value


def load_config_file(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{path} is not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config", f"{path} must contain a JSON object")
    return payload


def build_config(mode: str, file_values: Mapping[str, Any], flag_values: Mapping[str, Any]) -> ExperimentConfig:
    """Merge file values and flags (flags win) and validate the result."""
    merged: Dict[str, Any] = {}
    for source in (file_values, flag_values):
        for name, value in source.items():
            if name not in _FIELD_NAMES:
                raise ConfigError(name, "unknown configuration key")
            if value is None:
                continue
            if name in merged and merged[name] != value:
                logger.warning("Flag --%s overrides config file value %r", name, merged[name])
            merged[name] = _coerce(name, value)
    if merged.get("mode", mode) != mode:
        raise ConfigError("mode", f"config file says {merged['mode']!r} but subcommand is {mode!r}")
    merged["mode"] = mode
    config = ExperimentConfig(**merged)
    validate_config(config)
    return config


def _check_range(name: str, value: Optional[float], minimum: float) -> None:
    if value is not None and value < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {value}")


def validate_config(config: ExperimentConfig) -> None:
    if config.mode not in MODES:
        raise ConfigError("mode", f"must be one of {', '.join(MODES)}")
    if config.format not in FORMATS:
        raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")
    _check_range("trials", config.trials, 1)
    _check_range("bins", config.bins, MIN_BINS)
    _check_range("tau_points", config.tau_points, 2)
    _check_range("x_points", config.x_points, 3)
    if config.jobs == 0 or config.jobs < -1:
        raise ConfigError("jobs", "must be >= 1, or -1 for all cores")
    if not 0 <= config.seed <= UINT64_MAX:
        raise ConfigError("seed", "must be a 64-bit unsigned integer")
    if config.tau is not None and config.tau <= 0:
        raise ConfigError("tau", "must be > 0")
    _check_range("steps", config.steps, 1)

    if config.mode in SEQUENCE_MODES:
        _validate_sequence_mode(config)
    elif config.mode == "fit":
        if config.tau is None:
            raise ConfigError("tau", "fit needs the tau of the reference law")
        if config.steps is not None:
            raise ConfigError("steps", "fit takes tau only")
        if not config.spectrum:
            raise ConfigError("spectrum", "fit needs --spectrum pointing at a stored spectrum file")


def _validate_sequence_mode(config: ExperimentConfig) -> None:
    if (config.tau is None) == (config.steps is None):
        raise ConfigError("tau", "give exactly one of tau or steps")
    permutation_file = config.mode == "permutation" and config.permutation not in PERMUTATION_PRESETS
    if config.dim is None and not permutation_file:
        raise ConfigError("dim", "is required for this mode")
    minimum_dim = 2 if config.mode == "floquet" else 1
    _check_range("dim", config.dim, minimum_dim)
    if config.dim is not None and not 0 <= config.start < config.dim:
        raise ConfigError("start", f"must lie in 0..{config.dim - 1}")
    if config.mode == "floquet" and config.initial and not os.path.exists(config.initial):
        raise ConfigError("initial", f"file not found: {config.initial}")
    if permutation_file and not os.path.exists(config.permutation):
        raise ConfigError("permutation", f"expected identity, random or a JSON file path, got {config.permutation!r}")
