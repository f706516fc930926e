#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Laboratory Configuration Module
-------------------------------
Configuration management for harmonic_lab runs.

Settings come from three layers: command-line flags, an optional JSON
configuration file and the built-in defaults, in that order of precedence.
Environment variables are never read.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from geometry.geom_core import DEFAULT_TOL, Tolerances

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Any] = {
    "samples": 256,
    "t": 0.0,
    "tol": 1e-8,
    "format": "json",
    "out": None,
    "seed": 0,
    "allow_negative": False,
    "n_circles": 12,
    "n_points": 64,
    "resolution": 64,
    "kind": "figure1",
}

FORMATS = ("json", "csv")
FAMILY_COMMANDS = {
    ("construct", None),
    ("invariants", None),
    ("conjectures", "sin2theta"),
    ("conjectures", "isocurves"),
    ("transform", "to-homothetic"),
    ("plot", None),
}
PAIR_COMMANDS = {("conjectures", "area-sum"), ("transform", "to-harmonic")}


class ConfigError(ValueError):
    """Raised when a run configuration violates a precondition."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    action: Optional[str] = None
    n: Optional[int] = None
    x0: Optional[float] = None
    casey_d: Optional[float] = None
    a_h: Optional[float] = None
    b_h: Optional[float] = None
    omega: Optional[float] = None
    t: float = 0.0
    samples: int = 256
    tol: Tolerances = DEFAULT_TOL
    format: str = "json"
    out: Optional[str] = None
    seed: int = 0
    allow_negative: bool = False
    quantities: Tuple[str, ...] = field(default_factory=tuple)
    kind: str = "figure1"
    n_circles: int = 12
    n_points: int = 64
    resolution: int = 64

    @property
    def param(self) -> Optional[float]:
        return self.x0 if self.x0 is not None else self.casey_d


class LabConfig:
    """
    Holds configuration values loaded from an optional JSON file on top of DEFAULTS.
    """

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file
        self.config: Dict[str, Any] = dict(DEFAULTS)
        self.loaded = False

        if config_file:
            self.loaded = self.load_config(config_file)

    def load_config(self, config_file: str) -> bool:
        """
        Merge values from a JSON file into the configuration.

        Returns:
            True if the file was read, False otherwise
        """
        if not os.path.exists(config_file):
            logger.error(f"Configuration file not found: {config_file}")
            return False
        try:
            with open(config_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error loading configuration: {e}")
            return False
        if not isinstance(data, dict):
            logger.error(f"Configuration in {config_file} must be a JSON object")
            return False

        unknown = sorted(set(data) - set(DEFAULTS) - {"n", "x0", "casey_d", "a_h", "b_h", "omega", "quantities"})
        if unknown:
            logger.warning(f"Ignoring unknown configuration keys: {', '.join(unknown)}")
        self.config.update({k: v for k, v in data.items() if k not in unknown})
        logger.info(f"Loaded configuration from {config_file}")
        return True

    def save_config(self, config_file: Optional[str] = None) -> bool:
        config_file = config_file or self.config_file
        if not config_file:
            logger.error("No configuration file specified")
            return False
        try:
            with open(config_file, "w", encoding="utf-8") as f:
                json.dump(self.config, f, indent=2, sort_keys=True)
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")
            return False
        logger.info(f"Saved configuration to {config_file}")
        return True

    def get(self, key: str, default: Any = None) -> Any:
        return self.config.get(key, default)


def _pick(args, key: str, lab: LabConfig, attr: Optional[str] = None):
    value = getattr(args, attr or key, None)
    return value if value is not None else lab.get(key)


def _finite(name: str, value) -> Optional[float]:
    if value is None:
        return None
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return number


def build_run_config(args, lab: Optional[LabConfig] = None) -> RunConfig:
    """
    Merge parsed flags with the configuration file and validate the result.

    Raises:
        ConfigError: naming the violated precondition
    """
    lab = lab or LabConfig()
    if lab.config_file and not lab.loaded:
        raise ConfigError(f"could not read configuration file {lab.config_file}")

    command = args.command
    action = getattr(args, "action", None)
    key = (command, action if command in ("conjectures", "transform") else None)

    n = _pick(args, "n", lab)
    if n is not None:
        if isinstance(n, bool) or not float(n).is_integer() or int(n) < 3:
            raise ConfigError(f"parameter out of range: --n must be an integer >= 3, got {n}")
        n = int(n)

    x0 = _finite("--x0", _pick(args, "x0", lab))
    casey_d = _finite("--casey-d", _pick(args, "casey_d", lab))
    a_h = _finite("--ah", _pick(args, "a_h", lab, "ah"))
    b_h = _finite("--bh", _pick(args, "b_h", lab, "bh"))
    omega = _finite("--omega", _pick(args, "omega", lab))
    allow_negative = bool(args.allow_negative or lab.get("allow_negative"))

    if n is None:
        raise ConfigError("parameter out of range: --n is required")

    if key in FAMILY_COMMANDS or (key == ("transform", "loop") and omega is None):
        if (x0 is None) == (casey_d is None):
            raise ConfigError("exactly one of --x0 and --casey-d is required")
        name, value = ("--x0", x0) if x0 is not None else ("--casey-d", casey_d)
        if abs(value) >= 1.0:
            raise ConfigError(f"parameter out of range: |{name}| must be < 1, got {value}")
        if value < 0 and not allow_negative:
            logger.info(f"normalizing {name}={value} to {-value} (pass --allow-negative to keep the sign)")
            x0 = abs(x0) if x0 is not None else None
            casey_d = abs(casey_d) if casey_d is not None else None

    if key in PAIR_COMMANDS:
        if a_h is None or b_h is None:
            raise ConfigError("--ah and --bh are both required")
        if a_h <= 0 or b_h <= 0:
            raise ConfigError(f"parameter out of range: semiaxes must be positive, got a_h={a_h}, b_h={b_h}")
        if key == ("conjectures", "area-sum") and n % 2 == 0:
            raise ConfigError(f"parameter out of range: the area-sum conjecture needs odd N, got {n}")

    if omega is not None and not 0.0 < omega < math.pi / 2 - math.pi / n + 1e-15:
        raise ConfigError(f"parameter out of range: --omega must lie in (0, pi/2 - pi/N], got {omega}")

    samples = _pick(args, "samples", lab)
    if isinstance(samples, bool) or int(samples) != samples or int(samples) < 1:
        raise ConfigError(f"--samples must be a positive integer, got {samples}")

    tol_value = _finite("--tol", _pick(args, "tol", lab))
    if tol_value is None or tol_value <= 0:
        raise ConfigError(f"--tol must be positive, got {tol_value}")

    fmt = _pick(args, "format", lab)
    if fmt not in FORMATS:
        raise ConfigError(f"--format must be one of {', '.join(FORMATS)}, got {fmt!r}")

    kind = _pick(args, "kind", lab)
    resolution = int(_pick(args, "resolution", lab))
    if command == "plot" and resolution < 16:
        raise ConfigError(f"parameter out of range: --resolution must be >= 16, got {resolution}")

    counts = {}
    for key_name, flag in (("n_circles", "--n-circles"), ("n_points", "--n-points")):
        value = _pick(args, key_name, lab)
        if isinstance(value, bool) or int(value) != value or int(value) < 1:
            raise ConfigError(f"parameter out of range: {flag} must be a positive integer, got {value}")
        counts[key_name] = int(value)

    quantities = getattr(args, "quantity", None) or lab.get("quantities") or ()

    config = RunConfig(
        command=command,
        action=action,
        n=n,
        x0=x0,
        casey_d=casey_d,
        a_h=a_h,
        b_h=b_h,
        omega=omega,
        t=float(_finite("--t", _pick(args, "t", lab))),
        samples=int(samples),
        tol=DEFAULT_TOL.with_invariant(tol_value),
        format=fmt,
        out=_pick(args, "out", lab),
        seed=int(_pick(args, "seed", lab)),
        allow_negative=allow_negative,
        quantities=tuple(quantities),
        kind=kind,
        n_circles=counts["n_circles"],
        n_points=counts["n_points"],
        resolution=resolution,
    )
    logger.debug(f"run configuration: {config}")
    return config
