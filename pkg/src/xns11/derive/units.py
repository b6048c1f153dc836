"""The units X~, Y~ (on the quotient curve) and U~, V~ built from Siegel products."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

from xns11.arith.qexp import QSeries
from xns11.core.errors import IdentityError
from xns11.core.models import CheckResult
from xns11.derive.constants import ConstantTable, load_constants
from xns11.modular.siegel import (
    DEFAULT_ALPHA,
    FALLBACK_ALPHAS,
    INFINITY,
    UNIT_SPECS,
    CartanData,
    OrbitKey,
    Side,
    cartan_data,
    divisor,
    divisor_order,
    label_exponents,
    swap_sides,
    unit_product,
)

logger = logging.getLogger(__name__)

UNIT_NAMES = ("X", "Y", "U", "V")
EXPECTED_VALUATIONS = {"X": -2, "Y": -3, "U": -5, "V": -5}

_P, _M = Side.PLUS, Side.MINUS

EXPECTED_DIVISORS: dict[str, dict[OrbitKey, int]] = {
    "X": {(1, _P): -2, (1, _M): -2, (3, _P): 1, (3, _M): 1, (5, _P): 1, (5, _M): 1},
    "Y": {(1, _P): -3, (1, _M): -3, (3, _P): 1, (3, _M): 1, (2, _P): 2, (2, _M): 2},
    "U": {(1, _P): -5, (1, _M): -5, (2, _P): 4, (4, _P): 1, (3, _P): 5},
    "V": {(1, _P): -5, (1, _M): -5, (2, _M): 4, (4, _M): 1, (3, _M): 5},
}


@dataclass(frozen=True)
class UnitSet:
    """Normalised q_*-expansions (leading coefficient 1) of the four units."""

    X: QSeries
    Y: QSeries
    U: QSeries
    V: QSeries
    prec: int
    cartan: CartanData
    swapped: bool = False

    def spec(self, name: str) -> dict[OrbitKey, int]:
        """Exponents of the orbit products for a unit or a conjugate product (U1..V4)."""
        base = UNIT_SPECS[name]
        return swap_sides(base) if self.swapped else dict(base)

    def series(self, name: str) -> QSeries:
        return getattr(self, name)

    def with_roles_swapped(self) -> UnitSet:
        """Exchange the roles of g_k and h_k, which exchanges U~ and V~."""
        return replace(self, U=self.V, V=self.U, swapped=not self.swapped)

    @property
    def provenance(self) -> dict[str, object]:
        return {"alpha": self.cartan.alpha, "orbit_swap": self.swapped, "prec": self.prec}


def relation_residual(X: QSeries, Y: QSeries, c: ConstantTable) -> QSeries:
    """Y^2 + xy XY + y Y - (X^3 + x2 X^2 + x1 X)."""
    lhs = Y * Y + c["unit_relation.xy"] * X * Y + c["unit_relation.y"] * Y
    return lhs - (X * X * X + c["unit_relation.x2"] * X * X + c["unit_relation.x1"] * X)


def product_residual(units: UnitSet, c: ConstantTable) -> QSeries:
    """UV - Y^2 (X^2 - ey Y + ex X)."""
    X, Y = units.X, units.Y
    inner = X * X - c["unit_product.ey"] * Y + c["unit_product.ex"] * X
    return units.U * units.V - Y * Y * inner


def _alphas() -> Iterator[int]:
    yield DEFAULT_ALPHA
    yield from FALLBACK_ALPHAS


def build_units(prec: int, constants: ConstantTable | None = None) -> UnitSet:
    """Build X~, Y~, U~, V~ to O(q_*^prec) relative precision.

    The labels are taken in the rotation frame, where every non-square gives the same
    fibers. The default non-square is used; the fallbacks are only tried when a relation
    fails, which points at a damaged constant table rather than at the labelling.
    """
    c = constants or load_constants()
    for alpha in _alphas():
        cd = cartan_data(alpha)
        X = unit_product(UNIT_SPECS["X"], prec, cd, normalize=True)
        Y = unit_product(UNIT_SPECS["Y"], prec, cd, normalize=True)
        residual = relation_residual(X, Y, c)
        if not residual.is_zero():
            logger.warning("alpha=%d: unit relation fails at q^%s", alpha, residual.lead)
            continue
        U = unit_product(UNIT_SPECS["U"], prec, cd, normalize=True)
        V = unit_product(UNIT_SPECS["V"], prec, cd, normalize=True)
        units = UnitSet(X, Y, U, V, prec, cd)
        residual = product_residual(units, c)
        if not residual.is_zero():
            logger.warning("alpha=%d: UV relation fails at q^%s", alpha, residual.lead)
            continue
        if alpha != DEFAULT_ALPHA:
            logger.warning("units built with the fallback non-square alpha=%d", alpha)
        logger.info("units built to relative precision %d (alpha=%d)", prec, alpha)
        return units
    raise IdentityError("units.relation", "no cusp labelling satisfies the unit relations")


# ── Checks ────────────────────────────────────────────────────────────


def _expected_divisor(units: UnitSet, name: str) -> dict[OrbitKey, int]:
    expected = EXPECTED_DIVISORS[name]
    return swap_sides(expected) if units.swapped else dict(expected)


def verify_units(units: UnitSet, constants: ConstantTable | None = None) -> list[CheckResult]:
    c = constants or load_constants()
    results = []

    residual = relation_residual(units.X, units.Y, c)
    results.append(CheckResult.from_bool(
        "units.relation",
        "cubic relation between X~ and Y~",
        residual.is_zero(),
        first_failing=None if residual.is_zero() else residual.lead,
        order=str(residual.order),
    ))

    residual = product_residual(units, c)
    results.append(CheckResult.from_bool(
        "units.product",
        "U~V~ = Y~^2 (X~^2 - ey Y~ + ex X~)",
        residual.is_zero(),
        first_failing=None if residual.is_zero() else residual.lead,
        order=str(residual.order),
    ))

    valuations = {name: units.series(name).valuation for name in UNIT_NAMES}
    wrong = [n for n in UNIT_NAMES if valuations[n] != EXPECTED_VALUATIONS[n]]
    results.append(CheckResult.from_bool(
        "units.valuations",
        "pole orders at the cusp at infinity",
        not wrong,
        detail="" if not wrong else f"unexpected valuation for {', '.join(wrong)}",
        first_failing=wrong[0] if wrong else None,
        valuations={n: str(v) for n, v in valuations.items()},
    ))

    mismatched = []
    for name in UNIT_NAMES:
        spec = units.spec(name)
        orders = divisor(spec, units.cartan)
        expected = _expected_divisor(units, name)
        full = {key: Fraction(expected.get(key, 0)) for key in orders}
        at_infinity = divisor_order(label_exponents(spec, units.cartan), INFINITY)
        if (
            orders != full
            or sum(orders.values()) != 0
            or at_infinity != valuations[name]
        ):
            mismatched.append(name)
    results.append(CheckResult.from_bool(
        "units.divisors",
        "cuspidal divisors of the units, and valuation equal to the order at (1,0)",
        not mismatched,
        detail="" if not mismatched else f"divisor mismatch for {', '.join(mismatched)}",
        first_failing=mismatched[0] if mismatched else None,
    ))
    return results
