"""The generators X, Y of the quotient curve, their Fourier table, cusp values and j."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from xns11.arith.cyclo import SIGMA, CycElem
from xns11.arith.qexp import QSeries, first_disagreement
from xns11.core.models import CheckResult
from xns11.curves.ellmaps import (
    E_B,
    J_QUINTIC,
    FunctionPoint,
    horner,
    j_at_origin,
    j_at_P,
    j_map,
    j_oracle,
    reciprocal,
)
from xns11.derive.constants import ConstantTable, load_constants
from xns11.derive.units import UnitSet

logger = logging.getLogger(__name__)

J_AT_ORIGIN = 2**3 * 3**3 * 11**3
J_AT_P = -(2**15) * 5**3 * 3
JMAP_COEFFS = 20


@dataclass(frozen=True)
class PlaneGenerators:
    """X^, Y^ (linear in the units) and the generators X, Y of the quotient curve."""

    X_hat: QSeries
    Y_hat: QSeries
    X: QSeries
    Y: QSeries


@dataclass(frozen=True)
class GeneratorSet:
    """X, Y and T as q_*-expansions, with the discrete choices made on the way."""

    X: QSeries
    Y: QSeries
    T: QSeries
    provenance: dict[str, object] = field(default_factory=dict)

    def weierstrass_residual(self) -> QSeries:
        return E_B.residual(FunctionPoint(self.X, self.Y))

    def cover_residual(self) -> QSeries:
        """T^2 + (4X^3 + 7X^2 - 6X + 19)."""
        return self.T * self.T + horner((4, 7, -6, 19), self.X)


def cusp_base(c: ConstantTable) -> FunctionPoint:
    """(X(P_1), Y(P_1)) on E_B."""
    return FunctionPoint(c.cusp_x[1], c.cusp_y[1])


def build_XY(units: UnitSet, constants: ConstantTable | None = None) -> PlaneGenerators:
    c = constants or load_constants()
    Xt, Yt = units.X, units.Y
    X_hat = c["hat.x0"] + c["hat.x1"] * Xt
    Y_hat = c["hat.y0"] + c["hat.y1"] * Xt + c["hat.y2"] * Yt
    d = X_hat - c["generators.pole"]
    d2 = d * d
    num_x = (
        c["generators.alpha2"] * X_hat * X_hat
        + c["generators.alpha1"] * X_hat
        + c["generators.alpha0"]
        + c["generators.beta"] * Y_hat
    )
    num_y = (
        c["generators.gamma3"] * X_hat * X_hat * X_hat
        + c["generators.gamma2"] * X_hat * X_hat
        + c["generators.gamma1"] * X_hat
        + c["generators.gamma0"]
        + (c["generators.delta1"] * X_hat + c["generators.delta0"]) * Y_hat
    )
    X = num_x / d2
    Y = num_y / (d2 * d)
    logger.info("generators X, Y built to O(q^%s)", min(X.order, Y.order))
    return PlaneGenerators(X_hat, Y_hat, X, Y)


def _series_check(check_id: str, anchor: str, residual: QSeries) -> CheckResult:
    return CheckResult.from_bool(
        check_id,
        anchor,
        residual.is_zero(),
        first_failing=None if residual.is_zero() else residual.lead,
        order=str(residual.order),
    )


def table_mismatch(
    series: QSeries, table: Sequence[CycElem], start: int | Fraction = 0
) -> Fraction | None:
    """First exponent where the series disagrees with the tabulated coefficients."""
    for n, expected in enumerate(table):
        exponent = Fraction(start) + n
        if series.coefficient(exponent) != expected:
            return exponent
    return None


def check_j_map(gens: PlaneGenerators, coeffs: int = JMAP_COEFFS) -> CheckResult:
    """j(X, Y) against E4^3/Delta, on the q = q_*^11 coefficients that X and Y truncated
    to 11 * coeffs + 22 terms determine.

    Fails when fewer than ``coeffs`` of them could be compared.
    """
    keep = 11 * coeffs + 22
    X = gens.X.truncate(min(gens.X.prec, keep))
    Y = gens.Y.truncate(min(gens.Y.prec, keep))
    j = j_map(X, Y)
    order = j.order
    oracle = j_oracle(int(order))
    bad = first_disagreement(j, oracle)
    compared = len(range(-11, int(order), 11))
    logger.debug("j-map compared on %d coefficients of q (order %s)", compared, order)
    short = compared < coeffs
    return CheckResult.from_bool(
        "generators.j_map",
        "j as a rational function of X, Y equals E4^3/Delta",
        bad is None and j.valuation == -11 and not short,
        detail=f"{compared} of {coeffs} coefficients known; raise the order to {keep}"
        if short
        else "",
        first_failing=bad,
        coefficients_compared=compared,
        coefficients_required=coeffs,
        order=str(order),
    )


def verify_generators(
    units: UnitSet,
    gens: PlaneGenerators,
    constants: ConstantTable | None = None,
    jmap_coeffs: int = JMAP_COEFFS,
) -> list[CheckResult]:
    c = constants or load_constants()
    results = [
        _series_check(
            "generators.hat_curve",
            "Y^ and X^ satisfy the Weierstrass equation of E_B",
            E_B.residual(FunctionPoint(gens.X_hat, gens.Y_hat)),
        ),
        _series_check(
            "generators.curve",
            "X and Y satisfy the Weierstrass equation of E_B",
            E_B.residual(FunctionPoint(gens.X, gens.Y)),
        ),
    ]

    image = reciprocal(FunctionPoint(gens.X_hat, gens.Y_hat), cusp_base(c))
    bad = first_disagreement(image.x, gens.X) if isinstance(image, FunctionPoint) else 0
    if bad is None:
        bad = first_disagreement(image.y, gens.Y)
    results.append(CheckResult.from_bool(
        "generators.reciprocal",
        "(X, Y) = (X^, -1 - Y^) + (X(P_1), Y(P_1)) on E_B",
        bad is None,
        first_failing=bad,
    ))

    bad_x = table_mismatch(gens.X, c.fourier["X"])
    bad_y = table_mismatch(gens.Y, c.fourier["Y"])
    first = f"X:q^{bad_x}" if bad_x is not None else (
        f"Y:q^{bad_y}" if bad_y is not None else None
    )
    results.append(CheckResult.from_bool(
        "generators.fourier",
        "first Fourier coefficients of X and Y",
        first is None,
        first_failing=first,
        coefficients_checked=len(c.fourier["X"]),
    ))

    results.append(check_j_map(gens, jmap_coeffs))

    j0, jp = j_at_origin(), j_at_P()
    results.append(CheckResult.from_bool(
        "generators.j_special",
        "j at the origin and at the generator P of E_B",
        j0 == J_AT_ORIGIN and jp == J_AT_P,
        detail=f"j(O) = {j0}, j(P) = {jp}",
        first_failing=None if j0 == J_AT_ORIGIN else "O",
        j_origin=str(j0),
        j_P=str(jp),
    ))
    return results


# ── Values at the cusps ───────────────────────────────────────────────


def _eval_lowest_first(coeffs: Sequence[Fraction], z: CycElem) -> CycElem:
    acc = CycElem.zero()
    for coeff in reversed(coeffs):
        acc = acc * z + coeff
    return acc


def conjugate_assignment(c: ConstantTable) -> dict[int, int]:
    """k -> index of the conjugate z of eps with X(P_k), Y(P_k) given by z."""
    out = {}
    for k in sorted(c.cusp_x):
        for i, z in enumerate(c.eps_conjugates):
            if (
                _eval_lowest_first(c.x_of_z, z) == c.cusp_x[k]
                and _eval_lowest_first(c.y_of_z, z) == c.cusp_y[k]
            ):
                out[k] = i
                break
    return out


def verify_cusp_values(constants: ConstantTable | None = None) -> list[CheckResult]:
    """Exact checks on the tabulated values of X, Y, X^, Y^ at the cusps."""
    c = constants or load_constants()
    ks = sorted(c.cusp_x)
    results = []

    off = [k for k in ks if not horner(J_QUINTIC, c.cusp_x[k]).is_zero()]
    results.append(CheckResult.from_bool(
        "cusps.quintic",
        "each X(P_k) is a root of the quintic in the denominator of j",
        not off,
        first_failing=f"P_{off[0]}" if off else None,
    ))

    off = [k for k in ks if not E_B.residual(FunctionPoint(c.cusp_x[k], c.cusp_y[k])).is_zero()]
    results.append(CheckResult.from_bool(
        "cusps.on_curve",
        "each (X(P_k), Y(P_k)) lies on E_B",
        not off,
        first_failing=f"P_{off[0]}" if off else None,
    ))

    eps = CycElem.epsilon()
    conjugates = {eps.galois(d) for d in range(1, 6)}
    assignment = conjugate_assignment(c)
    bijective = len(assignment) == len(ks) and len(set(assignment.values())) == len(ks)
    results.append(CheckResult.from_bool(
        "cusps.conjugates",
        "X(P_k), Y(P_k) are the fixed polynomials in distinct conjugates of eps",
        bijective and set(c.eps_conjugates) == conjugates,
        first_failing=next((f"P_{k}" for k in ks if k not in assignment), None),
        assignment={str(k): v for k, v in assignment.items()},
    ))

    off = [
        k
        for k in ks
        if SIGMA(c.cusp_x[k]) != c.cusp_x[c.sigma[k]] or SIGMA(c.cusp_y[k]) != c.cusp_y[c.sigma[k]]
    ]
    cycle, k = [1], c.sigma[1]
    while k != 1 and len(cycle) <= len(ks):
        cycle.append(k)
        k = c.sigma[k]
    results.append(CheckResult.from_bool(
        "cusps.sigma",
        "zeta -> zeta^9 permutes the cusp values as P_1 -> P_4 -> P_5 -> P_2 -> P_3",
        not off and len(cycle) == len(ks),
        first_failing=f"P_{off[0]}" if off else None,
        cycle=cycle,
    ))

    base = cusp_base(c)
    off = []
    for k in sorted(c.hat_x):
        image = reciprocal(FunctionPoint(c.cusp_x[k], c.cusp_y[k]), base)
        if image != FunctionPoint(c.hat_x[k], c.hat_y[k]):
            off.append(k)
            continue
        back = reciprocal(image, base)
        if back != FunctionPoint(c.cusp_x[k], c.cusp_y[k]):
            off.append(k)
    results.append(CheckResult.from_bool(
        "cusps.hat_values",
        "X^(P_k), Y^(P_k) are the images of X(P_k), Y(P_k) under the reciprocal involution",
        not off,
        first_failing=f"P_{off[0]}" if off else None,
    ))
    return results
