"""Abstract base class for checks and the context they share."""

from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Callable, TypeVar

from xns11.core.config import RunConfig
from xns11.core.models import CheckResult

if TYPE_CHECKING:
    from xns11.derive.pipeline import Derivation

logger = logging.getLogger(__name__)

T = TypeVar("T")


class CheckContext:
    """Configuration plus lazily built artifacts, each built once even under a thread pool."""

    def __init__(self, config: RunConfig, audit: bool = False):
        self.config = config
        self.audit = audit
        self._guard = threading.Lock()
        self._locks: dict[str, threading.RLock] = {}
        self._artifacts: dict[str, Any] = {}

    def artifact(self, key: str, factory: Callable[[], T]) -> T:
        with self._guard:
            lock = self._locks.setdefault(key, threading.RLock())
        with lock:
            if key not in self._artifacts:
                logger.debug("building artifact %s", key)
                self._artifacts[key] = factory()
            return self._artifacts[key]

    def built(self) -> list[str]:
        with self._guard:
            return sorted(self._artifacts)

    @property
    def derivation(self) -> Derivation:
        from xns11.derive.pipeline import Derivation

        return self.artifact("derivation", lambda: Derivation(self.config.series.order))

    def provenance(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        with self._guard:
            derivation = self._artifacts.get("derivation")
        if derivation is not None:
            out.update(derivation.provenance())
        return out


class Check(ABC):
    """A named group of results computed from the shared context."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Check identifier."""

    @property
    @abstractmethod
    def scope(self) -> str:
        """Scope of ``verify`` / ``periods`` / ``isom`` the check belongs to."""

    @abstractmethod
    def run(self, context: CheckContext) -> list[CheckResult]:
        """Compute the results; may raise, the runner records the error."""
