"""Tests for plane curves, monodromy and numerical period matrices."""

import mpmath
import numpy as np
import pytest
import sympy

from xns11.arith.qexp import QSeries
from xns11.core.errors import ConvergenceError, IdentityError
from xns11.curves.agm import agm_lattice
from xns11.curves.ellmaps import E_A, E_D, WeierstrassModel
from xns11.curves.riemann import (
    Differential,
    PlaneCurve,
    branch_points,
    genus2_curve,
    monodromy,
    omega_genus2,
    period_matrix,
    plane_model_xns,
    select_component,
    t,
    z,
)

# ── Fixtures ──────────────────────────────────────────────────────────

SQUARE = WeierstrassModel.from_ainvs("y2=x3-x", (0, 0, 0, -1, 0))


@pytest.fixture(scope="module")
def square_curve():
    return PlaneCurve("y2=x3-x", z**2 - (t**3 - t), expected_genus=1)


@pytest.fixture(scope="module")
def genus2_periods():
    return omega_genus2(tol=1e-8, bits=128)


def _in_lattice(lattice, values, rel_tol=1e-5) -> bool:
    return all(lattice.contains(mpmath.mpc(complex(v)), rel_tol) for v in values)


# ── Tests ─────────────────────────────────────────────────────────────


def test_plane_curve_fiber_and_membership(square_curve):
    assert square_curve.degree == 2
    assert square_curve.is_even_in_z()
    fiber = square_curve.fiber(2.0)
    assert np.allclose(sorted(fiber.real), [-np.sqrt(6), np.sqrt(6)])
    assert square_curve.contains(2.0, np.sqrt(6))
    assert not square_curve.contains(2.0, 2.0)


def test_plane_curve_needs_z():
    with pytest.raises(ValueError, match="no z-dependence"):
        PlaneCurve("flat", t**2 - 1)


def test_from_sympy_renames_symbols():
    x, y = sympy.symbols("x y")
    curve = PlaneCurve.from_sympy("c", y**3 - x, x, y)
    assert curve.degree == 3
    assert curve.contains(8.0, 2.0)


def test_branch_points_of_square_curve(square_curve):
    points = sorted(float(mpmath.re(p)) for p in branch_points(square_curve, bits=64))
    assert points == pytest.approx([-1.0, 0.0, 1.0])


def test_monodromy_of_square_curve(square_curve):
    mono = monodromy(square_curve)
    assert mono.genus == 1
    assert all(lp.permutation == (1, 0) for lp in mono.loops)
    # three finite branch points, so infinity is branched too
    assert mono.infinity == (1, 0)
    assert mono.to_dict()["infinity"] == [1, 0]


def test_wrong_expected_genus_rejected():
    curve = PlaneCurve("y2=x3-x", z**2 - (t**3 - t), expected_genus=2)
    with pytest.raises(ConvergenceError, match="genus 1"):
        monodromy(curve)


def test_square_curve_periods_match_agm(square_curve):
    result = period_matrix(square_curve, [Differential("w", 1 / (2 * z))], tol=1e-9)
    assert result.omega.shape == (1, 2)
    lattice = agm_lattice(SQUARE)
    assert _in_lattice(lattice, result.omega[0], rel_tol=1e-8)
    w1, w2 = result.omega[0]
    assert abs((w1.conjugate() * w2).imag) == pytest.approx(float(lattice.covolume), rel=1e-8)
    assert result.null_residual < 1e-8


def test_genus2_branch_points():
    points = branch_points(genus2_curve(), bits=128)
    assert len(points) == 6


def test_genus2_periods_shape_and_quality(genus2_periods):
    assert genus2_periods.genus == 2
    assert genus2_periods.labels == ("A", "D")
    assert genus2_periods.omega.shape == (2, 4)
    assert genus2_periods.stability < 1e-7
    assert genus2_periods.null_residual < 1e-7


def test_genus2_periods_lie_in_elliptic_lattices(genus2_periods):
    assert _in_lattice(agm_lattice(E_A), genus2_periods.omega[0])
    assert _in_lattice(agm_lattice(E_D), genus2_periods.omega[1])


def test_genus2_audit_record(genus2_periods):
    audit = genus2_periods.audit()
    assert len(audit["cycles"]) == 4
    form = np.array(audit["intersection"])
    assert (form == -form.T).all()
    assert audit["curve"] == "genus2"


def test_plane_model_of_xns_is_sextic_in_z():
    curve = plane_model_xns()
    assert curve.degree == 6
    assert curve.expected_genus == 4
    assert curve.is_even_in_z()


def test_select_component_on_series_point():
    three = QSeries.constant(3, 10)
    expr = (t - z) * (t + z + 1)
    assert select_component(expr, (three, three)) == t - z
    with pytest.raises(IdentityError, match="0 components"):
        select_component(expr, (three, -three))


def test_plane_model_from_exact_series_point(derivation):
    gens = derivation.generators()
    T = gens.T.truncate(40)
    Z = (2 * gens.Y.truncate(40) + 1) * T
    numeric = plane_model_xns()
    assert plane_model_xns((T, Z)).expr == numeric.expr
    # the model is even in z, so (T, -Z) lies on the same component
    assert plane_model_xns((T, -Z)).expr == numeric.expr
