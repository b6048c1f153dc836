"""The maps from X_ns(11) to E_A..E_D and the genus-2 quotient, and the differentials
they pull back.

With Z = (2Y + 1) T the genus-2 quotient is Z^2 = -(4X^3 - 4X^2 - 28X + 41)(4X^3 + 7X^2 -
6X + 19) and its function field is generated by T and Z. Every identity is checked twice
where possible: symbolically with sympy and on the q_*-expansions of X, Y, T.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import sympy

from xns11.arith.cyclo import CycElem
from xns11.arith.qexp import QSeries, first_disagreement, qs_derive
from xns11.core.models import CheckResult
from xns11.curves.ellmaps import (
    CUBIC_A,
    CUBIC_D,
    CURVES,
    FunctionPoint,
    apply_map,
    horner,
    map_residual,
)
from xns11.derive.constants import ConstantTable, exchanged_normalisers, load_constants
from xns11.derive.generators import GeneratorSet, table_mismatch

logger = logging.getLogger(__name__)

x, y, T, Z = sympy.symbols("x y T Z")

# (map, coordinates it is applied to) for every map checked on the expansions
MAP_SOURCES = {
    "phi_B": "xyt",
    "phi_X": "xyt",
    "phi_C": "xyt",
    "pi_A": "genus2",
    "pi_D": "genus2",
}

# omega_L = scale * pullback of the invariant differential of E_L
DIFFERENTIAL_SCALES = {"A": 4, "B": 4, "C": 4, "D": -4}
QUOTIENT_MAPS = {"A": ("pi_A", "genus2"), "B": ("phi_B", "xyt"), "C": ("phi_C", "xyt"),
                 "D": ("pi_D", "genus2")}


def _polys_in_tz() -> tuple[sympy.Expr, sympy.Expr, sympy.Expr, sympy.Expr]:
    """M, N and the two quartic factors of 3N^2 + 14NM - 24M^2."""
    M = T**4 - 11 * T**2 + Z**2
    N = 12 * T**4 + 187 * T**2 + Z**2
    P = 18 * T**4 + 121 * T**2 + 7 * Z**2
    Q = 32 * T**4 + 605 * T**2 - Z**2
    return M, N, P, Q


@dataclass(frozen=True)
class Differentials:
    """omega_A..omega_D as series f with omega = f dq_*."""

    Z: QSeries
    dX: QSeries
    omega: dict[str, QSeries]


def differentials(gens: GeneratorSet) -> Differentials:
    X, Y, T_ = gens.X, gens.Y, gens.T
    Z_ = (2 * Y + 1) * T_
    dX = qs_derive(X)
    return Differentials(
        Z=Z_,
        dX=dX,
        omega={
            "A": 44 * dX / Z_,
            "B": 4 * dX / (2 * Y + 1),
            "C": -4 * dX / T_,
            "D": 4 * (3 * X - 1) * dX / Z_,
        },
    )


def _series_result(check_id: str, anchor: str, bad: Fraction | int | None) -> CheckResult:
    return CheckResult.from_bool(check_id, anchor, bad is None, first_failing=bad)


def _zero_result(check_id: str, anchor: str, residual: QSeries) -> CheckResult:
    return _series_result(check_id, anchor, None if residual.is_zero() else residual.lead)


# ── Maps ──────────────────────────────────────────────────────────────


def check_maps(gens: GeneratorSet, d: Differentials) -> list[CheckResult]:
    sources = {"xyt": (gens.X, gens.Y, gens.T), "genus2": (gens.X, d.Z)}
    anchors = {
        "phi_B": "(x, y, t) -> (x, y) lands on E_B",
        "phi_X": "(x, y, t) -> (x, (2y + 1) t) lands on the genus-2 quotient",
        "phi_C": "(x, y, t) -> (-x - 1, (t + x + 1)/2) lands on E_C",
        "pi_A": "pi_A o phi_X lands on E_A",
        "pi_D": "pi_D o phi_X lands on E_D",
    }
    results = []
    for name, source in MAP_SOURCES.items():
        residual = map_residual(name, sources[source])
        results.append(_zero_result(f"maps.{name}", anchors[name], residual))
    return results


# ── Identities in T and Z ─────────────────────────────────────────────


def factorisation_holds() -> bool:
    M, N, P, Q = _polys_in_tz()
    return sympy.expand(3 * N**2 + 14 * N * M - 24 * M**2 - P * Q) == 0


def check_tz_identities(gens: GeneratorSet, d: Differentials) -> list[CheckResult]:
    X, T_, Z_ = gens.X, gens.T, d.Z
    T2 = T_ * T_
    T4 = T2 * T2
    Z2 = Z_ * Z_
    M = T4 - 11 * T2 + Z2
    N = 12 * T4 + 187 * T2 + Z2
    P = 18 * T4 + 121 * T2 + 7 * Z2
    Q = 32 * T4 + 605 * T2 - Z2
    dT = qs_derive(T_)

    results = [
        _zero_result(
            "maps.x_formula",
            "X * 4(T^4 - 11T^2 + Z^2) = 12T^4 + 187T^2 + Z^2",
            X * 4 * M - N,
        ),
        _zero_result(
            "maps.tdt",
            "T dT = -(6X^2 + 7X - 3) dX",
            T_ * dT + (6 * X * X + 7 * X - 3) * d.dX,
        ),
        CheckResult.from_bool(
            "maps.factorisation",
            "3N^2 + 14NM - 24M^2 = (18T^4 + 121T^2 + 7Z^2)(32T^4 + 605T^2 - Z^2)",
            factorisation_holds(),
        ),
    ]

    omega_c = 32 * M * M * dT / (P * Q)
    results.append(_series_result(
        "maps.omega_c",
        "omega_C = 32 M^2 dT / ((18T^4 + 121T^2 + 7Z^2)(32T^4 + 605T^2 - Z^2))",
        first_disagreement(omega_c, d.omega["C"]),
    ))

    multiples = {
        "A": -11 * T_ / Z_ * omega_c,
        "B": -T2 / Z_ * omega_c,
        "D": -T_ * Q / (4 * Z_ * M) * omega_c,
    }
    bad = None
    for label, series in multiples.items():
        first = first_disagreement(series, d.omega[label])
        if first is not None:
            bad = f"{label}:q^{first}"
            break
    results.append(CheckResult.from_bool(
        "maps.multiples",
        "omega_A, omega_B, omega_D as multiples of omega_C in T and Z",
        bad is None,
        first_failing=bad,
    ))
    return results


# ── Pullbacks ─────────────────────────────────────────────────────────


def _vanishes_on(expr: sympy.Expr, var: sympy.Symbol, rhs: sympy.Expr) -> bool:
    """expr = 0 on the curve var^2 = rhs."""
    num, _ = sympy.fraction(sympy.together(expr))
    reduced = sympy.rem(sympy.expand(num), var**2 - rhs, var)
    return sympy.expand(reduced) == 0


def symbolic_pullbacks() -> dict[str, bool]:
    """The differential identities behind omega_A, omega_C, omega_D, in x, y (and t)."""
    A = horner(CUBIC_A, x)
    D = horner(CUBIC_D, x)
    genus2 = -A * D
    t = sympy.Symbol("t")

    xa = horner((-13, 13, 102, -147), x) / A
    ya = horner((-8, 19, -10, 6), x) * y / (2 * A**2) + horner((9, -9, -74, 106), x) / (2 * A)
    xd = horner((27, 138, -101, -749), x) / D
    yd = (121 * horner((1, -1, -29, -53), x) * y / D**2 - 1) / 2
    xc, yc = -x - 1, (t + x + 1) / 2

    return {
        "A": _vanishes_on(4 * sympy.diff(xa, x) / (2 * ya + xa + 1) - 44 / y, y, genus2),
        "D": _vanishes_on(-4 * sympy.diff(xd, x) / (2 * yd + 1) - 4 * (3 * x - 1) / y,
                          y, genus2),
        "C": sympy.expand(2 * yc + xc - t) == 0,
    }


def invariant_pullback(label: str, gens: GeneratorSet, d: Differentials) -> QSeries:
    """scale * dx/(2y + a1 x + a3) pulled back along the map to E_label, per dq_*."""
    name, source = QUOTIENT_MAPS[label]
    point = (gens.X, gens.Y, gens.T) if source == "xyt" else (gens.X, d.Z)
    image = apply_map(name, point)
    assert isinstance(image, FunctionPoint)
    model = CURVES[label]
    denom = 2 * image.y + model.a1 * image.x + model.a3
    return DIFFERENTIAL_SCALES[label] * qs_derive(image.x) / denom


def check_pullbacks(gens: GeneratorSet, d: Differentials) -> list[CheckResult]:
    exact = symbolic_pullbacks()
    wrong = [label for label, ok in exact.items() if not ok]
    results = [CheckResult.from_bool(
        "maps.pullbacks_exact",
        "pi_A^*(4dx/(2y+x+1)) = 44dx/y, pi_D^*(-4dx/(2y+1)) = 4(3x-1)dx/y, 2y_C + x_C = t",
        not wrong,
        first_failing=wrong[0] if wrong else None,
    )]

    bad = None
    for label in sorted(DIFFERENTIAL_SCALES):
        first = first_disagreement(invariant_pullback(label, gens, d), d.omega[label])
        if first is not None:
            bad = f"{label}:q^{first}"
            break
    results.append(CheckResult.from_bool(
        "maps.pullbacks",
        "omega_A..omega_D are the scaled invariant differentials pulled back to X_ns(11)",
        bad is None,
        first_failing=bad,
    ))
    return results


# ── Cuspforms ─────────────────────────────────────────────────────────


# variants of the tabulated normalisers, tried in order when a cuspform does not start at 1
NORMALISER_VARIANTS: dict[str, Callable[[ConstantTable], dict[str, CycElem]]] = {
    "(eps - 2) power and factor of B and C exchanged": lambda c: exchanged_normalisers(
        c, "B", "C"
    ),
}


def cuspform_normaliser(
    label: str, d: Differentials, c: ConstantTable
) -> tuple[CycElem, str | None]:
    """The normaliser giving the cuspform leading coefficient 1, and the variant used.

    The tabulated value is taken when it works. Otherwise the first variant of
    NORMALISER_VARIANTS that does is returned with its name; if none does, the tabulated
    value comes back and the table check reports the mismatch.
    """
    printed = c.cuspforms[label].normaliser
    lead = d.omega[label].leading_coefficient()
    if printed * lead == 1:
        return printed, None
    for variant, build in NORMALISER_VARIANTS.items():
        candidate = build(c)[label]
        if candidate * lead == 1:
            return candidate, variant
    return printed, None


def normalised_cuspform(label: str, d: Differentials, c: ConstantTable) -> QSeries:
    """normaliser * omega * q_* / dq_*."""
    normaliser, _ = cuspform_normaliser(label, d, c)
    return (d.omega[label] * normaliser).shift(1)


def check_cuspforms(d: Differentials, c: ConstantTable) -> CheckResult:
    bad = None
    variants: dict[str, str] = {}
    for label in sorted(c.cuspforms):
        normaliser, variant = cuspform_normaliser(label, d, c)
        if variant is not None:
            logger.warning("cuspform %s normalised with %s", label, variant)
            variants[label] = variant
        f = (d.omega[label] * normaliser).shift(1)
        first = table_mismatch(f, c.cuspforms[label].table, 1)
        if first is not None:
            bad = f"{label}:q^{first}"
            break
    return CheckResult.from_bool(
        "maps.cuspforms",
        "first Fourier coefficients of the four normalised cuspforms",
        bad is None,
        detail="; ".join(f"{label} holds with {v}" for label, v in variants.items()),
        first_failing=bad,
        coefficients_checked={label: len(cf.table) for label, cf in sorted(c.cuspforms.items())},
        normaliser_variants=variants,
    )


def verify_differentials(
    gens: GeneratorSet, constants: ConstantTable | None = None
) -> list[CheckResult]:
    c = constants or load_constants()
    d = differentials(gens)
    logger.info("checking maps and differentials to O(q^%s)", gens.T.order)
    return [
        *check_maps(gens, d),
        *check_tz_identities(gens, d),
        *check_pullbacks(gens, d),
        check_cuspforms(d, c),
    ]
