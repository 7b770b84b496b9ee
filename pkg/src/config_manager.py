"""
Environment Configuration Management for the Trilinear Hawking Simulator

This module provides environment-specific settings for numerics, outputs and
logging. Defaults are deep-merged with ``config/<environment>.yaml`` and then
with ``HAWKING_*`` environment variable overrides.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml  # type: ignore

from . import __version__
from .errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
INTEGRATORS = ("eigen", "adaptive")


class ConfigFormat(Enum):
    """Supported configuration file formats."""

    JSON = "json"
    YAML = "yaml"


class Environment(Enum):
    """Deployment environments."""

    DEVELOPMENT = "development"
    TESTING = "testing"
    PRODUCTION = "production"


@dataclass
class NumericsConfig:
    """Tolerances and solver defaults."""

    tail_tol: float = 1e-12
    eps_psd: float = 1e-10
    norm_tol: float = 1e-9
    margin_tol: float = 1e-10
    default_d_tau: float = 0.01
    workers: int = 1
    integrator: str = "eigen"


@dataclass
class OutputConfig:
    """Result file settings."""

    float_digits: int = 12
    output_directory: str = "results"
    write_metadata: bool = True


@dataclass
class LoggingConfig:
    """Logging settings."""

    log_level: str = "INFO"
    log_file: str = "logs/simulation.log"


class SimulationConfigManager:
    """
    Environment-aware settings with YAML layering, environment overrides,
    dot-notation access and validation.
    """

    ENV_OVERRIDES = {
        "HAWKING_LOG_LEVEL": ("logging", "log_level", str),
        "HAWKING_WORKERS": ("numerics", "workers", int),
        "HAWKING_TAIL_TOL": ("numerics", "tail_tol", float),
        "HAWKING_OUTPUT_DIR": ("output", "output_directory", str),
    }

    def __init__(
        self, config_dir: str = "config", environment: Optional[Environment] = None
    ):
        """
        Initialize the configuration manager.

        Args:
            config_dir: Directory containing environment YAML files
            environment: Target environment (auto-detected if None)
        """
        self.config_dir = Path(config_dir)
        self.environment = environment or self._detect_environment()
        self.config: Dict[str, Any] = {}

        logger.info(
            f"SimulationConfigManager initialized for {self.environment.value} environment"
        )

        self._load_default_config()
        self._load_environment_config()
        self._apply_environment_overrides()

    def _detect_environment(self) -> Environment:
        """Detect the environment from HAWKING_ENVIRONMENT."""
        env_var = os.getenv("HAWKING_ENVIRONMENT", "").lower()

        if env_var in ["prod", "production"]:
            return Environment.PRODUCTION
        elif env_var in ["test", "testing"]:
            return Environment.TESTING
        else:
            return Environment.DEVELOPMENT

    def _load_default_config(self):
        """Load default configuration settings."""
        self.config = {
            "numerics": asdict(NumericsConfig()),
            "output": asdict(OutputConfig()),
            "logging": asdict(LoggingConfig()),
            "general": {
                "app_name": "Trilinear Hawking Simulator",
                "version": __version__,
            },
        }
        logger.debug("Default configuration loaded")

    def _load_environment_config(self):
        """Deep-merge config/<environment>.yaml when present."""
        config_file = self.config_dir / f"{self.environment.value}.yaml"

        if not config_file.exists():
            logger.debug(f"No environment config at {config_file}")
            return

        try:
            with open(config_file, "r", encoding="utf-8") as f:
                env_config = yaml.safe_load(f) or {}
            self.config = self._deep_merge(self.config, env_config)
            logger.info(f"Environment configuration loaded from {config_file}")
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"Failed to load environment config: {e}")

    def _apply_environment_overrides(self):
        """Apply HAWKING_* environment variable overrides."""
        for env_var, (section, key, cast) in self.ENV_OVERRIDES.items():
            value = os.getenv(env_var)
            if value is None:
                continue
            try:
                self.config[section][key] = cast(value)
            except ValueError as e:
                raise ConfigError(env_var, f"cannot parse '{value}': {e}") from e
            logger.info(f"Applied environment override: {env_var} -> {section}.{key}")

    def _deep_merge(self, base: Dict, override: Dict) -> Dict:
        """Deep merge two dictionaries."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value

        return result

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Args:
            key: Configuration key in dot notation (e.g., 'numerics.tail_tol')
            default: Default value if key is not found

        Returns:
            Configuration value or default
        """
        value: Any = self.config
        try:
            for k in key.split("."):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """
        Set a configuration value using dot notation.

        Args:
            key: Configuration key in dot notation
            value: Value to set
        """
        keys = key.split(".")
        config = self.config

        for k in keys[:-1]:
            config = config.setdefault(k, {})

        old_value = config.get(keys[-1])
        config[keys[-1]] = value
        logger.info(f"Configuration updated: {key} = {value} (was: {old_value})")

    def validate_config(self) -> Dict[str, List[str]]:
        """
        Validate the current configuration.

        Returns:
            Dictionary of validation errors by section
        """
        errors: Dict[str, List[str]] = {}

        numerics_errors = []
        for key in ["tail_tol", "eps_psd", "norm_tol", "margin_tol", "default_d_tau"]:
            if not self.get(f"numerics.{key}", 0) > 0:
                numerics_errors.append(f"{key} must be positive")
        if self.get("numerics.tail_tol", 0) >= 1:
            numerics_errors.append("tail_tol must be below 1")
        if int(self.get("numerics.workers", 0)) < 1:
            numerics_errors.append("workers must be at least 1")
        if self.get("numerics.integrator") not in INTEGRATORS:
            numerics_errors.append(f"integrator must be one of {', '.join(INTEGRATORS)}")
        if numerics_errors:
            errors["numerics"] = numerics_errors

        output_errors = []
        if not 6 <= int(self.get("output.float_digits", 0)) <= 17:
            output_errors.append("float_digits must be between 6 and 17")
        if not self.get("output.output_directory"):
            output_errors.append("output_directory is required")
        if output_errors:
            errors["output"] = output_errors

        if str(self.get("logging.log_level", "")).upper() not in LOG_LEVELS:
            errors["logging"] = [f"log_level must be one of {', '.join(LOG_LEVELS)}"]

        if not errors:
            logger.info("Configuration validation passed")
        else:
            logger.warning(f"Configuration validation found {len(errors)} issues")

        return errors

    def save_config(
        self, path: Union[str, Path, None] = None, format_type: ConfigFormat = ConfigFormat.YAML
    ) -> bool:
        """
        Save current configuration to file.

        Args:
            path: Target file (default: config/current.<format>)
            format_type: YAML or JSON

        Returns:
            True if successful, False otherwise
        """
        config_file = Path(path) if path else self.config_dir / f"current.{format_type.value}"

        try:
            config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(config_file, "w", encoding="utf-8") as f:
                if format_type == ConfigFormat.JSON:
                    json.dump(self.config, f, indent=2, default=str)
                else:
                    yaml.safe_dump(self.config, f, default_flow_style=False)
            logger.info(f"Configuration saved to {config_file}")
            return True
        except OSError as e:
            logger.error(f"Failed to save configuration: {e}")
            return False

    def get_summary(self) -> Dict[str, Any]:
        """Get a summary of the current configuration."""
        return {
            "environment": self.environment.value,
            "config_sections": list(self.config.keys()),
            "validation_status": "valid" if not self.validate_config() else "has_errors",
        }


def create_config_manager(
    environment: Optional[str] = None, config_dir: str = "config"
) -> SimulationConfigManager:
    """Factory function to create a configuration manager."""
    env = Environment(environment.lower()) if environment else None
    return SimulationConfigManager(config_dir=config_dir, environment=env)
