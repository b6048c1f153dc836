"""Exception hierarchy."""

from __future__ import annotations


class Xns11Error(Exception):
    """Base class for every error raised by the package."""


class ConfigError(Xns11Error, ValueError):
    """Invalid run configuration."""


class NotInSubfieldError(Xns11Error, ValueError):
    """A cyclotomic element does not lie in the requested subfield."""


class IncompatibleSeriesError(Xns11Error, ValueError):
    """Two q-series cannot be combined, or a zero series was inverted."""


class DomainMismatchError(Xns11Error, TypeError):
    """Exact and numeric coefficient domains were mixed."""


class PoleError(Xns11Error, ZeroDivisionError):
    """A rational formula was evaluated at one of its poles."""


class IdentityError(Xns11Error):
    """An identity the pipeline depends on does not hold."""

    def __init__(self, check_id: str, message: str, first_failing: str | None = None):
        super().__init__(f"{check_id}: {message}")
        self.check_id = check_id
        self.first_failing = first_failing


class ConvergenceError(Xns11Error, RuntimeError):
    """A numerical procedure could not reach its tolerance."""


class ReconstructionError(Xns11Error, ArithmeticError):
    """A numerically known matrix could not be recognised as rational."""
