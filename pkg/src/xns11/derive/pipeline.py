"""Staged construction of X, Y and T with each stage built once and shared."""

from __future__ import annotations

import logging
import threading
import time
from typing import Callable, TypeVar

from xns11.derive.constants import ConstantTable, load_constants
from xns11.derive.generators import GeneratorSet, PlaneGenerators, build_XY
from xns11.derive.trace import TraceData, build_T
from xns11.derive.units import UnitSet, build_units

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Derivation:
    """units -> plane generators -> trace -> GeneratorSet, at one series precision.

    Stages are built lazily; concurrent callers of the same stage wait for the first one.
    """

    def __init__(self, order: int, constants: ConstantTable | None = None):
        self.order = order
        self.constants = constants or load_constants()
        self._lock = threading.RLock()
        self._stages: dict[str, object] = {}

    def _stage(self, name: str, build: Callable[[], T]) -> T:
        with self._lock:
            if name not in self._stages:
                start = time.time()
                self._stages[name] = build()
                logger.info("stage %s built in %.1fs", name, time.time() - start)
            return self._stages[name]  # type: ignore[return-value]

    def has_stage(self, name: str) -> bool:
        with self._lock:
            return name in self._stages

    def units(self) -> UnitSet:
        return self._stage("units", lambda: build_units(self.order, self.constants))

    def plane(self) -> PlaneGenerators:
        return self._stage("plane", lambda: build_XY(self.units(), self.constants))

    def trace(self) -> TraceData:
        return self._stage("trace", lambda: build_T(self.units(), self.plane(), self.constants))

    def generators(self) -> GeneratorSet:
        def build() -> GeneratorSet:
            plane, trace = self.plane(), self.trace()
            return GeneratorSet(plane.X, plane.Y, trace.T, self.provenance())

        return self._stage("generators", build)

    def provenance(self) -> dict[str, object]:
        """Discrete choices made by the stages built so far."""
        with self._lock:
            out: dict[str, object] = {"order": self.order, "constants": self.constants.digest}
            units = self._stages.get("units")
            if isinstance(units, UnitSet):
                out.update(units.provenance)
            trace = self._stages.get("trace")
            if isinstance(trace, TraceData):
                out.update(trace.provenance)
            return out
