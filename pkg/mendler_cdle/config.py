#!/usr/bin/env python3
"""
Configuration management for mendler_cdle
Handles evaluation and benchmark settings from JSON files and the environment
"""

import json
import logging
import os
from dataclasses import dataclass, asdict, field, fields
from pathlib import Path
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = "MENDLER_CDLE_"
TRUE_VALUES = ('1', 'true', 'yes')
DEFAULT_FUEL = 10_000_000


def env_flag(name: str) -> bool:
    """Read a boolean MENDLER_CDLE_* environment variable"""
    return os.environ.get(ENV_PREFIX + name, '').strip().lower() in TRUE_VALUES


@dataclass
class EvalConfig:
    """Settings for normalization and definitional equality"""
    fuel: int = DEFAULT_FUEL
    eta_enabled: bool = False
    strict_rho: bool = False

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError(f"fuel must be positive, got {self.fuel}")

    # Normal order is the only strategy; kept in reports for the record
    @property
    def strategy(self) -> str:
        return "leftmost-outermost"

    def with_eta(self, enabled: bool = True) -> 'EvalConfig':
        """Copy of this config with η switched on or off"""
        return EvalConfig(fuel=self.fuel, eta_enabled=enabled, strict_rho=self.strict_rho)

    def to_dict(self) -> dict:
        """Convert to dictionary"""
        data = asdict(self)
        data['strategy'] = self.strategy
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'EvalConfig':
        """Create from dictionary"""
        data = {k: v for k, v in data.items() if k != 'strategy'}
        return cls(**data)


def _doubling(limit: int) -> List[int]:
    points, n = [], 1
    while n <= limit:
        points.append(n)
        n *= 2
    return points


@dataclass
class BenchConfig:
    """Which numerals the benchmark measures, and how"""
    pred_points: List[int] = field(default_factory=lambda: _doubling(256))
    size_points: List[int] = field(default_factory=lambda: list(range(1, 65)))
    parigot_points: List[int] = field(default_factory=lambda: list(range(1, 13)))
    fuel: int = DEFAULT_FUEL
    workers: int = 1

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError(f"fuel must be positive, got {self.fuel}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")

    def eval_config(self) -> EvalConfig:
        return EvalConfig(fuel=self.fuel)

    def to_dict(self) -> dict:
        """Convert to dictionary"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'BenchConfig':
        """Create from dictionary"""
        return cls(**data)


@dataclass
class Settings:
    """Everything the command line can be told through a config file"""
    eval: EvalConfig = field(default_factory=EvalConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    format: str = "table"
    verbose: bool = False

    def to_dict(self) -> dict:
        return {
            'eval': self.eval.to_dict(),
            'bench': self.bench.to_dict(),
            'format': self.format,
            'verbose': self.verbose,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Settings':
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise KeyError(f"Unknown configuration keys: {', '.join(sorted(unknown))}")
        return cls(
            eval=EvalConfig.from_dict(data.get('eval', {})),
            bench=BenchConfig.from_dict(data.get('bench', {})),
            format=data.get('format', 'table'),
            verbose=bool(data.get('verbose', False)),
        )


class ConfigManager:
    """Loads settings from the first config file found, then the environment"""

    DEFAULT_CONFIG_LOCATIONS = [
        # Search local directory first (project-specific configs)
        Path.cwd() / "mendler_cdle_config.json",
        Path.cwd() / ".mendler_cdle.json",
        # Then user's home directory (global config)
        Path.home() / ".mendler_cdle" / "config.json",
    ]

    def __init__(self, config_path: Optional[Path] = None, verbose: bool = False,
                 environ: Optional[Dict[str, str]] = None):
        """
        Initialize config manager

        Args:
            config_path: Optional path to config file. If None, searches default locations.
            verbose: If True, log where settings came from at INFO level
            environ: Environment mapping to read overrides from (defaults to os.environ)
        """
        self.config_path = None
        self.settings = Settings()
        self.verbose = verbose
        self._environ = os.environ if environ is None else environ

        if config_path:
            config_path = Path(config_path)
            if not config_path.exists():
                raise FileNotFoundError(
                    f"Configuration file not found: {config_path}\n"
                    f"Copy mendler_cdle_config.example.json to get started"
                )
            self.load(config_path)
        else:
            self._load_from_defaults()

        self._apply_environment()

    def _log(self, message: str):
        if self.verbose:
            logger.info(message)
        else:
            logger.debug(message)

    def _load_from_defaults(self):
        """Try to load config from default locations"""
        for path in self.DEFAULT_CONFIG_LOCATIONS:
            if path.exists():
                self._log(f"Loading config from: {path}")
                self.load(path)
                return
        self._log("No configuration file found; using defaults")

    def load(self, config_path: Path) -> bool:
        """
        Load settings from a JSON file

        Args:
            config_path: Path to configuration file

        Returns:
            True if loaded successfully

        Raises:
            FileNotFoundError: If config file doesn't exist
            json.JSONDecodeError: If config file is invalid JSON
            KeyError: If the file has keys this version does not know
        """
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            self.settings = Settings.from_dict(data)
            self.config_path = Path(config_path)
            self._log(f"[OK] Loaded settings from: {config_path}")
            return True

        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        except json.JSONDecodeError as e:
            raise json.JSONDecodeError(
                f"Invalid JSON in configuration file: {config_path}", e.doc, e.pos
            )
        except TypeError as e:
            raise KeyError(f"Unknown field in configuration {config_path}: {e}")

    def _apply_environment(self):
        env = self._environ
        if ENV_PREFIX + "FUEL" in env:
            fuel = int(env[ENV_PREFIX + "FUEL"])
            self.settings.eval = EvalConfig(fuel=fuel, eta_enabled=self.settings.eval.eta_enabled,
                                            strict_rho=self.settings.eval.strict_rho)
            self.settings.bench.fuel = fuel
            self.settings.bench.__post_init__()
        if ENV_PREFIX + "ETA" in env:
            self.settings.eval.eta_enabled = env[ENV_PREFIX + "ETA"].strip().lower() in TRUE_VALUES
        if ENV_PREFIX + "FORMAT" in env:
            self.settings.format = env[ENV_PREFIX + "FORMAT"]
        if ENV_PREFIX + "WORKERS" in env:
            self.settings.bench.workers = int(env[ENV_PREFIX + "WORKERS"])
            self.settings.bench.__post_init__()
        if ENV_PREFIX + "VERBOSE" in env:
            self.settings.verbose = env[ENV_PREFIX + "VERBOSE"].strip().lower() in TRUE_VALUES

    def save(self, config_path: Optional[Path] = None) -> bool:
        """
        Save settings to file

        Args:
            config_path: Optional path to save to. Uses loaded path if None.

        Returns:
            True if saved successfully
        """
        path = config_path or self.config_path
        if not path:
            raise ValueError("No config path specified")
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.settings.to_dict(), f, indent=2)
            self.config_path = path
            return True
        except OSError as e:
            logger.error(f"Error saving config: {e}")
            return False
