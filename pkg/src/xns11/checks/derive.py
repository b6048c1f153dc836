"""Exact checks on the q-expansions of the units, X, Y and T."""

from __future__ import annotations

from xns11.core.check import Check, CheckContext
from xns11.core.models import CheckResult
from xns11.derive.constants import verify_constants
from xns11.derive.differentials import verify_differentials
from xns11.derive.generators import verify_cusp_values, verify_generators
from xns11.derive.remarks import verify_remarks
from xns11.derive.trace import verify_trace
from xns11.derive.units import verify_units


class ConstantsCheck(Check):
    @property
    def name(self) -> str:
        return "constants"

    @property
    def scope(self) -> str:
        return "units"

    def run(self, context: CheckContext) -> list[CheckResult]:
        return verify_constants(context.derivation.constants)


class UnitsCheck(Check):
    @property
    def name(self) -> str:
        return "units"

    @property
    def scope(self) -> str:
        return "units"

    def run(self, context: CheckContext) -> list[CheckResult]:
        d = context.derivation
        return verify_units(d.units(), d.constants)


class GeneratorsCheck(Check):
    @property
    def name(self) -> str:
        return "generators"

    @property
    def scope(self) -> str:
        return "generators"

    def run(self, context: CheckContext) -> list[CheckResult]:
        d = context.derivation
        return verify_generators(
            d.units(), d.plane(), d.constants, context.config.series.jmap_coeffs
        )


class CuspValuesCheck(Check):
    @property
    def name(self) -> str:
        return "cusps"

    @property
    def scope(self) -> str:
        return "generators"

    def run(self, context: CheckContext) -> list[CheckResult]:
        return verify_cusp_values(context.derivation.constants)


class TraceCheck(Check):
    @property
    def name(self) -> str:
        return "trace"

    @property
    def scope(self) -> str:
        return "trace"

    def run(self, context: CheckContext) -> list[CheckResult]:
        d = context.derivation
        return verify_trace(d.trace(), d.plane(), d.constants)


class RemarksCheck(Check):
    @property
    def name(self) -> str:
        return "remarks"

    @property
    def scope(self) -> str:
        return "remarks"

    def run(self, context: CheckContext) -> list[CheckResult]:
        d = context.derivation
        return verify_remarks(d.trace(), d.plane(), d.constants)


class MapsCheck(Check):
    @property
    def name(self) -> str:
        return "maps"

    @property
    def scope(self) -> str:
        return "maps"

    def run(self, context: CheckContext) -> list[CheckResult]:
        d = context.derivation
        return verify_differentials(d.generators(), d.constants)
