##
# Experiment configuration merged from a config file and command line flags.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Experiment configuration.

Values arrive as strings, from an `ExperimentConfigParser` file and from the
command line, and are converted and validated in one place. Command line values
override file values key by key.
"""

import logging
from dataclasses import dataclass, fields
from typing import Callable, Mapping, Optional

from confsetlib.errors import UsageError
from confsetlib.models import ModelSpec
from confsetlib.parsers.base_parser import BaseParser
from confsetlib.parsers.config_parser import ExperimentConfigParser
from confsetlib.parsers.model_parser import load_model_file

logger = logging.getLogger(__name__)

_int_parser = BaseParser("ExperimentConfig")


def _to_int(value: str) -> int:
    return _int_parser.ConvertToInt(value)


def _float_list(value: str) -> tuple[float, ...]:
    return tuple(float(v) for v in value.split(",") if v.strip())


def _int_list(value: str) -> tuple[int, ...]:
    return tuple(_to_int(v) for v in value.split(",") if v.strip())


# config key -> (attribute, converter)
CONFIG_KEYS: dict[str, tuple[str, Callable[[str], object]]] = {
    "model": ("model_path", str),
    "gamma": ("gammas", _float_list),
    "seed": ("seed", _to_int),
    "trials": ("trials", _to_int),
    "t": ("t_grid", _int_list),
    "samples": ("samples", _to_int),
    "cap": ("cap", _to_int),
    "out": ("out", str),
    "workers": ("workers", _to_int),
    "z": ("z", str),
    "surrogate-pi": ("surrogate_pi", float),
    "tolerance": ("tolerance", float),
    "spread-tolerance": ("spread_tolerance", float),
    "reps": ("reps", _to_int),
    "smb-n": ("smb_n", _to_int),
    "joint": ("joint", str),
    "db": ("db", str),
    "junit": ("junit", str),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings of one run.

    Attributes:
        model_path (str): JSON model file
        gammas (tuple[float, ...]): confidence levels
        seed (int): base seed, 0 <= seed < 2^64
        trials (int): coverage trials or oracle cases
        t_grid (tuple[int, ...]): sequence lengths, strictly increasing
        samples (int): observations per t in the growth experiment
        cap (int): maximum core size of an explicit confidence set
        out (str): output path, stdout when None
        workers (int): joblib worker count
        z (str): observation string (build only)
        surrogate_pi (float): erasure probability used to simulate erasure_unknown channels
        tolerance (float): growth rate tolerance in bits
        spread_tolerance (float): allowed spread of final rates across gammas
        reps (int): Monte Carlo replicates of the entropy estimate
        smb_n (int): path length of the Monte Carlo entropy estimate
        joint (str): joint term of the Monte Carlo estimate, "sampled" or "closed_form"
        db (str): results database path
        junit (str): JUnit xml path
    """

    model_path: Optional[str] = None
    gammas: tuple[float, ...] = (0.9,)
    seed: int = 0
    trials: int = 1000
    t_grid: tuple[int, ...] = (12,)
    samples: int = 100
    cap: int = 2**20
    out: Optional[str] = None
    workers: int = 1
    z: Optional[str] = None
    surrogate_pi: Optional[float] = None
    tolerance: float = 0.03
    spread_tolerance: float = 0.02
    reps: int = 30
    smb_n: int = 10000
    joint: str = "sampled"
    db: Optional[str] = None
    junit: Optional[str] = None

    def __post_init__(self) -> None:
        """Checks value ranges.

        Raises:
            (UsageError): a value is out of range
        """
        if not self.gammas:
            raise UsageError("At least one gamma is required")
        for gamma in self.gammas:
            if not 0.0 < gamma < 1.0:
                raise UsageError(f"gamma must lie strictly between 0 and 1, got {gamma}")
        if not 0 <= self.seed < 2**64:
            raise UsageError(f"seed must be an unsigned 64 bit integer, got {self.seed}")
        if not self.t_grid or any(t < 1 for t in self.t_grid):
            raise UsageError(f"t grid must hold positive lengths, got {list(self.t_grid)}")
        if any(b <= a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise UsageError(f"t grid must be strictly increasing, got {list(self.t_grid)}")
        for name in ("trials", "samples", "cap", "reps", "smb_n"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.workers == 0 or self.workers < -1:
            raise UsageError(f"workers must be positive or -1 for all cores, got {self.workers}")
        if self.surrogate_pi is not None and not 0.0 < self.surrogate_pi < 1.0:
            raise UsageError(f"surrogate-pi must lie strictly between 0 and 1, got {self.surrogate_pi}")
        if self.tolerance <= 0.0 or self.spread_tolerance <= 0.0:
            raise UsageError("tolerances must be positive")
        if self.joint not in ("sampled", "closed_form"):
            raise UsageError(f"joint must be 'sampled' or 'closed_form', got {self.joint!r}")

    @classmethod
    def from_values(cls, values: Mapping[str, Optional[str]]) -> "ExperimentConfig":
        """Builds a config from string values keyed by config key names; None values are skipped.

        Raises:
            (UsageError): unknown key or unparsable value
        """
        kwargs = {}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in CONFIG_KEYS:
                raise UsageError(f"Unknown config key {key!r}")
            attribute, convert = CONFIG_KEYS[key]
            try:
                kwargs[attribute] = convert(str(raw).strip())
            except ValueError as exc:
                raise UsageError(f"Invalid value {raw!r} for {key}: {exc}") from None
        return cls(**kwargs)

    @classmethod
    def from_sources(
        cls, config_file: Optional[str] = None, overrides: Optional[Mapping[str, Optional[str]]] = None
    ) -> "ExperimentConfig":
        """Merges a config file with command line values, the latter taking precedence."""
        values = {}
        if config_file is not None:
            values.update(ExperimentConfigParser().ParseFile(config_file).Dict)
            logger.debug("Loaded %d config values from %s", len(values), config_file)
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        return cls.from_values(values)

    def as_values(self) -> dict[str, str]:
        """Returns the settings keyed by config key names, for run records."""
        attribute_to_key = {attribute: key for key, (attribute, _) in CONFIG_KEYS.items()}
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            out[attribute_to_key[f.name]] = str(value)
        return out

    def load_model(self) -> ModelSpec:
        """Loads and validates the configured model file.

        Raises:
            (UsageError): no model file configured
            (ModelValidationError): the file is unreadable or invalid
        """
        if self.model_path is None:
            raise UsageError("A model file is required (--model)")
        return load_model_file(self.model_path)
