"""
Scenario Configuration Module for the Trilinear Hawking Simulator

Parses flat ``key=value`` scenario files, merges command-line overrides and
validates the result into a ScenarioConfig.
"""

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values

from .errors import ConfigError
from .full_solver import METHODS

# Configure logging
logger = logging.getLogger(__name__)

SOLVERS = ("parametric", "semiclassical", "shorttime", "full")
PUMPS = ("coherent", "fock")
REQUIRED_KEYS = ("solver", "n_a0")

# Every observable column a scenario can write, in file order.
OBSERVABLE_COLUMNS = (
    "tau",
    "Na",
    "Nb",
    "Nc",
    "S_a",
    "S_b",
    "F_b",
    "I_b",
    "I_a_bc",
    "I_b_c",
    "q_plus",
    "q_minus",
    "d_eff_a",
    "d_eff_bc",
    "T_eff",
    "within_validity",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Resolved scenario.

    Attributes:
        solver: parametric, semiclassical, shorttime or full
        pump: coherent or fock
        n_a0: Initial mean pump occupation (the Fock level for pump=fock)
        tau_max: Last time of the grid
        d_tau: Grid spacing
        cutoff: Sector cutoff S_max, or None for the automatic choice
        tol: Propagation tolerance of the exact solver
        outputs: Columns to write (tau is always written)
        out_path: CSV path
        workers: Sector thread-pool size
        integrator: eigen or adaptive
        omega_b: Signal frequency used for temperatures
    """

    solver: str
    n_a0: float
    pump: str = "coherent"
    tau_max: float = 3.0
    d_tau: float = 0.01
    cutoff: Optional[int] = None
    tol: float = 1e-10
    outputs: Tuple[str, ...] = OBSERVABLE_COLUMNS
    out_path: str = "results/scenario.csv"
    workers: int = 1
    integrator: str = "eigen"
    omega_b: float = 1.0

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ConfigError("solver", f"'{self.solver}' is not one of {', '.join(SOLVERS)}")
        if self.pump not in PUMPS:
            raise ConfigError("pump", f"'{self.pump}' is not one of {', '.join(PUMPS)}")
        if not math.isfinite(self.n_a0) or self.n_a0 < 0:
            raise ConfigError("n_a0", f"must be a nonnegative number, got {self.n_a0}")
        if self.pump == "fock" and not float(self.n_a0).is_integer():
            raise ConfigError("n_a0", f"a Fock pump needs an integer occupation, got {self.n_a0}")
        if self.solver == "parametric" and self.n_a0 == 0:
            raise ConfigError("n_a0", "the parametric solver needs a positive pump amplitude")
        if not self.tau_max > 0:
            raise ConfigError("tau_max", f"must be positive, got {self.tau_max}")
        if not self.d_tau > 0:
            raise ConfigError("d_tau", f"must be positive, got {self.d_tau}")
        if self.cutoff is not None and self.cutoff < 0:
            raise ConfigError("cutoff", f"must be 'auto' or a nonnegative integer, got {self.cutoff}")
        if not self.tol > 0:
            raise ConfigError("tol", f"must be positive, got {self.tol}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be at least 1, got {self.workers}")
        if self.integrator not in METHODS:
            raise ConfigError("integrator", f"'{self.integrator}' is not one of {', '.join(METHODS)}")
        if not self.omega_b > 0:
            raise ConfigError("omega_b", f"must be positive, got {self.omega_b}")
        unknown = [name for name in self.outputs if name not in OBSERVABLE_COLUMNS]
        if unknown:
            raise ConfigError("outputs", f"unknown observables {unknown}")

    @property
    def amplitude(self) -> float:
        """Classical pump amplitude A = sqrt(n_a0)."""
        return math.sqrt(self.n_a0)

    def tau_grid(self) -> np.ndarray:
        """Uniform grid from 0 to tau_max with spacing as close to d_tau as fits."""
        steps = max(1, int(round(self.tau_max / self.d_tau)))
        return np.linspace(0.0, self.tau_max, steps + 1)

    def columns(self) -> Tuple[str, ...]:
        """Selected columns in file order, tau first."""
        return tuple(name for name in OBSERVABLE_COLUMNS if name == "tau" or name in self.outputs)

    def to_dict(self) -> Dict[str, Any]:
        resolved = asdict(self)
        resolved["cutoff"] = "auto" if self.cutoff is None else self.cutoff
        resolved["outputs"] = list(self.outputs)
        return resolved


def _parse_float(value: Any) -> float:
    return float(value)


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"{value} is not an integer")
        return int(value)
    return int(str(value).strip())


def _parse_cutoff(value: Any) -> Optional[int]:
    if value is None or str(value).strip().lower() == "auto":
        return None
    return _parse_int(value)


def _parse_outputs(value: Any) -> Tuple[str, ...]:
    if isinstance(value, str):
        names = [name.strip() for name in value.split(",")]
    else:
        names = [str(name).strip() for name in value]
    names = [name for name in names if name]
    if not names or names == ["all"]:
        return OBSERVABLE_COLUMNS
    return tuple(names)


def _parse_str(value: Any) -> str:
    return str(value).strip()


PARSERS: Dict[str, Callable[[Any], Any]] = {
    "solver": lambda value: _parse_str(value).lower(),
    "pump": lambda value: _parse_str(value).lower(),
    "n_a0": _parse_float,
    "tau_max": _parse_float,
    "d_tau": _parse_float,
    "cutoff": _parse_cutoff,
    "tol": _parse_float,
    "outputs": _parse_outputs,
    "out_path": _parse_str,
    "workers": _parse_int,
    "integrator": lambda value: _parse_str(value).lower(),
    "omega_b": _parse_float,
}


def read_scenario_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    """
    Read a flat key=value scenario file.

    Args:
        path: Scenario file (UTF-8, '#' comments)

    Returns:
        Raw string values by key

    Raises:
        FileNotFoundError: If the file doesn't exist
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")

    values = dict(dotenv_values(path, encoding="utf-8", interpolate=False))
    logger.info(f"Read {len(values)} scenario keys from {path}")
    return values


def parse_config(
    path: Union[str, Path, None] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    defaults: Optional[Mapping[str, Any]] = None,
) -> ScenarioConfig:
    """
    Build a ScenarioConfig from a scenario file and command-line overrides.

    Precedence is overrides > file > defaults > ScenarioConfig defaults.

    Args:
        path: Optional scenario file
        overrides: Values from command-line flags (None entries are ignored)
        defaults: Environment defaults, e.g. d_tau and workers

    Returns:
        Validated ScenarioConfig

    Raises:
        ConfigError: Unknown key, unparsable value or missing required key
    """
    raw: Dict[str, Any] = {}
    for source in (defaults or {}, read_scenario_file(path) if path else {}, overrides or {}):
        for key, value in source.items():
            if key not in PARSERS:
                raise ConfigError(key, "unknown scenario key")
            if value is not None:
                raw[key] = value

    missing = [key for key in REQUIRED_KEYS if key not in raw]
    if missing:
        raise ConfigError(missing[0], "required key is missing")

    resolved: Dict[str, Any] = {}
    for key, value in raw.items():
        try:
            resolved[key] = PARSERS[key](value)
        except (TypeError, ValueError) as e:
            raise ConfigError(key, f"cannot parse '{value}': {e}") from e

    config = ScenarioConfig(**resolved)
    logger.info(
        f"Resolved scenario: solver={config.solver}, pump={config.pump}, "
        f"n_a0={config.n_a0}, tau_max={config.tau_max}, d_tau={config.d_tau}"
    )
    return config
