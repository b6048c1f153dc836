"""Configuration loading and management."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from xns11.core.errors import ConfigError

CACHE_DIR_ENV = "XNS11_CACHE_DIR"
DEFAULT_CACHE_DIR = "~/.cache/xns11"
MIN_ORDER = 50
MIN_BITS = 53
MIN_NMAX = 100


@dataclass
class SeriesConfig:
    """Precision of the exact q-expansions.

    The j-map check needs order >= 11 * jmap_coeffs + 22.
    """

    order: int = 250
    jmap_coeffs: int = 20


@dataclass
class NumericConfig:
    """Working precision and tolerances of the period computations."""

    bits: int = 256
    elliptic_bits: int = 128
    tol: float = 1e-10
    nmax: int = 20000
    lattice_tol: float = 1e-4
    membership_tol_new: float = 1e-6
    membership_tol_ns: float = 1e-5
    max_den: int = 1000
    standoff: float = 0.125
    scales: list[int] = field(default_factory=lambda: [1, 4])


@dataclass
class RunConfig:
    """Top-level run configuration."""

    series: SeriesConfig = field(default_factory=SeriesConfig)
    numeric: NumericConfig = field(default_factory=NumericConfig)
    cache_dir: str = DEFAULT_CACHE_DIR
    results_dir: str = "results"
    reporter: str = "console"
    max_workers: int = 1
    log_level: str = "INFO"
    checks: list[str] = field(default_factory=list)

    @classmethod
    def from_yaml(cls, path: str | Path) -> RunConfig:
        """Load configuration from a YAML file."""
        path = Path(path)
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        """Create configuration from a dictionary."""
        config = cls()

        if "series" in data:
            se = data["series"] or {}
            series_defaults = SeriesConfig()
            config.series = SeriesConfig(
                order=int(se.get("order", series_defaults.order)),
                jmap_coeffs=int(se.get("jmap_coeffs", series_defaults.jmap_coeffs)),
            )

        if "numeric" in data:
            nu = data["numeric"] or {}
            defaults = NumericConfig()
            config.numeric = NumericConfig(
                bits=int(nu.get("bits", defaults.bits)),
                elliptic_bits=int(nu.get("elliptic_bits", defaults.elliptic_bits)),
                tol=float(nu.get("tol", defaults.tol)),
                nmax=int(nu.get("nmax", defaults.nmax)),
                lattice_tol=float(nu.get("lattice_tol", defaults.lattice_tol)),
                membership_tol_new=float(
                    nu.get("membership_tol_new", defaults.membership_tol_new)
                ),
                membership_tol_ns=float(nu.get("membership_tol_ns", defaults.membership_tol_ns)),
                max_den=int(nu.get("max_den", defaults.max_den)),
                standoff=float(Fraction(str(nu.get("standoff", defaults.standoff)))),
                scales=[int(s) for s in nu.get("scales", defaults.scales)],
            )

        config.cache_dir = data.get("cache_dir", DEFAULT_CACHE_DIR)
        config.results_dir = data.get("results_dir", "results")
        config.reporter = data.get("reporter", "console")
        config.max_workers = data.get("max_workers", 1)
        config.log_level = data.get("log_level", "INFO")
        config.checks = list(data.get("checks", []))

        return config

    def apply_environment(self, environ: dict[str, str] | None = None) -> None:
        """Let XNS11_CACHE_DIR override the cache directory of the file."""
        env = os.environ if environ is None else environ
        if env.get(CACHE_DIR_ENV):
            self.cache_dir = env[CACHE_DIR_ENV]

    def merge_overrides(
        self,
        order: int | None = None,
        bits: int | None = None,
        tol: float | None = None,
        nmax: int | None = None,
        cache_dir: str | None = None,
        max_workers: int | None = None,
        log_level: str | None = None,
        checks: list[str] | None = None,
    ) -> None:
        """Apply CLI overrides to the config."""
        if order is not None:
            self.series.order = order
        if bits is not None:
            self.numeric.bits = bits
        if tol is not None:
            self.numeric.tol = tol
        if nmax is not None:
            self.numeric.nmax = nmax
        if cache_dir:
            self.cache_dir = cache_dir
        if max_workers is not None:
            self.max_workers = max_workers
        if log_level:
            self.log_level = log_level
        if checks:
            self.checks = checks

    def validate(self) -> None:
        """Raise ConfigError on the first violated bound."""
        if self.series.order < MIN_ORDER:
            raise ConfigError(f"order must be >= {MIN_ORDER}, got {self.series.order}")
        if self.series.jmap_coeffs < 1:
            raise ConfigError(f"jmap_coeffs must be >= 1, got {self.series.jmap_coeffs}")
        n = self.numeric
        if n.bits < MIN_BITS or n.elliptic_bits < MIN_BITS:
            raise ConfigError(f"bits must be >= {MIN_BITS}, got {n.bits}/{n.elliptic_bits}")
        if n.nmax < MIN_NMAX:
            raise ConfigError(f"nmax must be >= {MIN_NMAX}, got {n.nmax}")
        for name in ("tol", "lattice_tol", "membership_tol_new", "membership_tol_ns", "standoff"):
            if getattr(n, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(n, name)}")
        if n.max_den < 1:
            raise ConfigError(f"max_den must be >= 1, got {n.max_den}")
        if not n.scales or any(s < 1 for s in n.scales):
            raise ConfigError(f"scales must be positive integers, got {n.scales}")
        if self.max_workers < 1:
            raise ConfigError(f"max_workers must be >= 1, got {self.max_workers}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
