"""Tests for the generators X, Y of the function field and the cusp table."""

from fractions import Fraction

from xns11.curves.ellmaps import E_B, FunctionPoint
from xns11.derive.generators import (
    J_AT_ORIGIN,
    JMAP_COEFFS,
    check_j_map,
    conjugate_assignment,
    cusp_base,
    table_mismatch,
    verify_cusp_values,
    verify_generators,
)

# ── Tests ─────────────────────────────────────────────────────────────


def test_xy_on_quotient_curve(derivation):
    plane = derivation.plane()
    assert E_B.residual(FunctionPoint(plane.X, plane.Y)).is_zero()
    assert E_B.residual(FunctionPoint(plane.X_hat, plane.Y_hat)).is_zero()


def test_generators_pole_orders(derivation):
    plane = derivation.plane()
    assert plane.X.valuation == 0
    assert plane.Y.valuation == 0


def test_verify_generators_passes(derivation, constants, jmap_coeffs):
    results = verify_generators(
        derivation.units(), derivation.plane(), constants, jmap_coeffs
    )
    by_id = {r.check_id: r for r in results}
    assert set(by_id) == {
        "generators.hat_curve",
        "generators.curve",
        "generators.reciprocal",
        "generators.fourier",
        "generators.j_map",
        "generators.j_special",
    }
    assert [r.check_id for r in results if not r.passed] == []
    assert by_id["generators.j_special"].data["j_origin"] == str(J_AT_ORIGIN)


def test_j_map_limits_coefficients(derivation):
    short = check_j_map(derivation.plane(), coeffs=3)
    full = check_j_map(derivation.plane())
    assert short.passed
    assert short.data["coefficients_compared"] >= 3
    assert short.data["coefficients_compared"] < full.data["coefficients_compared"]


def test_j_map_fails_when_series_are_too_short(derivation):
    result = check_j_map(derivation.plane(), coeffs=JMAP_COEFFS)
    assert derivation.order < 11 * JMAP_COEFFS + 22
    assert not result.passed
    assert result.first_failing_coefficient is None
    assert result.data["coefficients_compared"] < JMAP_COEFFS
    assert result.data["coefficients_required"] == JMAP_COEFFS
    assert "raise the order" in result.detail


def test_table_mismatch_reports_first_exponent(derivation, constants):
    X = derivation.plane().X
    table = list(constants.fourier["X"])
    assert table_mismatch(X, table) is None
    table[2] = table[2] + 1
    assert table_mismatch(X, table) == Fraction(2)


def test_cusp_base_is_value_at_infinity(derivation, constants):
    base = cusp_base(constants)
    plane = derivation.plane()
    assert plane.X.coefficient(0) == base.x
    assert plane.Y.coefficient(0) == base.y


def test_cusp_values(constants):
    results = verify_cusp_values(constants)
    assert [r.check_id for r in results] == [
        "cusps.quintic",
        "cusps.on_curve",
        "cusps.conjugates",
        "cusps.sigma",
        "cusps.hat_values",
    ]
    assert all(r.passed for r in results)
    assert results[3].data["cycle"] == [1, 4, 5, 2, 3]


def test_conjugate_assignment_is_bijective(constants):
    assignment = conjugate_assignment(constants)
    assert sorted(assignment) == [1, 2, 3, 4, 5]
    assert sorted(assignment.values()) == [0, 1, 2, 3, 4]
