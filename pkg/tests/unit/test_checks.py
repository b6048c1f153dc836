"""Tests for the period and isomorphism checks on synthetic lattices."""

import json
from types import SimpleNamespace

import mpmath
import numpy as np
import pytest

from xns11.checks import artifacts
from xns11.checks.isom import IsomorphismCheck, QuotientCheck
from xns11.checks.periods import Genus2PeriodsCheck, NewPeriodsCheck, NsPeriodsCheck
from xns11.core.check import CheckContext
from xns11.core.config import RunConfig
from xns11.curves.agm import EllipticLattice
from xns11.modular.msym import OmegaNew, PeriodValue

# ── Fixtures ──────────────────────────────────────────────────────────

LABELS = ("A", "B", "C", "D")
TAUS = {"A": 1.3j, "B": 0.2 + 1.1j, "C": 1.7j, "D": -0.3 + 0.9j}
SCALE = {"A": 1.0, "B": 0.8, "C": 1.5, "D": 0.6}


@pytest.fixture
def lattices():
    return {
        label: EllipticLattice(
            mpmath.mpc(SCALE[label]), mpmath.mpc(SCALE[label] * TAUS[label])
        )
        for label in LABELS
    }


def _product(lattices, labels):
    g = len(labels)
    omega = np.zeros((g, 2 * g), dtype=complex)
    for i, label in enumerate(labels):
        omega[i, 2 * i] = complex(lattices[label].omega1)
        omega[i, 2 * i + 1] = complex(lattices[label].omega2)
    return omega


UNIMODULAR = np.eye(8, dtype=int) + np.diag(np.ones(7, dtype=int), 1)


@pytest.fixture
def omega_new(lattices):
    matrix = _product(lattices, LABELS) @ np.diag([1, 1, 1, 1, 2, 2, 6, 6])
    entries = [[PeriodValue(complex(v), 100, 1e-15) for v in row] for row in matrix]
    return OmegaNew(matrix, entries, np.full((4, 8), 1e-13))


def _periods(omega, labels, genus):
    mono = SimpleNamespace(genus=genus, loops=[1] * 6, nontrivial=[1] * 5)
    return SimpleNamespace(
        omega=omega,
        labels=labels,
        monodromy=mono,
        genus=genus,
        stability=1e-12,
        null_residual=1e-13,
        audit=lambda: {"loops": 6},
    )


@pytest.fixture
def omega_ns(omega_new):
    return _periods(omega_new.matrix @ UNIMODULAR, LABELS, 4)


@pytest.fixture
def omega_x(lattices):
    return _periods(_product(lattices, ("A", "D")) @ np.diag([1, 1, 3, 3]), ("A", "D"), 2)


@pytest.fixture
def context(tmp_path, mocker, lattices, omega_new, omega_ns, omega_x):
    config = RunConfig(results_dir=str(tmp_path))
    for module in ("xns11.checks.periods", "xns11.checks.isom"):
        mocker.patch(f"{module}.elliptic_lattices", return_value=lattices)
        mocker.patch(f"{module}.new_periods", return_value=omega_new)
        mocker.patch(f"{module}.ns_periods", return_value=omega_ns)
        mocker.patch(f"{module}.genus2_periods", return_value=omega_x)
    return CheckContext(config)


# ── Tests ─────────────────────────────────────────────────────────────


def test_new_periods_check(context):
    results = NewPeriodsCheck().run(context)
    assert [r.check_id for r in results] == [
        "periods.x0121-new.shape",
        "periods.x0121-new.stability",
        "periods.x0121-new.membership",
    ]
    assert all(r.passed for r in results)
    assert results[2].data["inside"] == 32
    assert len(results[0].data["matrix"]) == 4


def test_new_periods_membership_failure(context, omega_new):
    omega_new.matrix[2, 5] += 0.01
    results = NewPeriodsCheck().run(context)
    assert not results[2].passed
    assert results[2].first_failing_coefficient == "C[5]"


def test_ns_periods_check(context):
    results = NsPeriodsCheck().run(context)
    assert all(r.passed for r in results)
    assert results[2].data["row_scales"] == [1, 1, 1, 1]


def test_genus2_periods_check_with_audit(context, tmp_path):
    context.audit = True
    results = Genus2PeriodsCheck().run(context)
    assert all(r.passed for r in results)
    audit = json.loads((tmp_path / "audit_genus2.json").read_text())
    assert audit == {"loops": 6}


def test_genus_mismatch_fails(context, omega_x):
    omega_x.monodromy.genus = 3
    results = Genus2PeriodsCheck().run(context)
    assert not results[0].passed
    assert results[0].first_failing_coefficient == "genus 3"


def test_isomorphism_check(context):
    [result] = IsomorphismCheck().run(context)
    assert result.passed
    assert abs(result.data["det"]) == 1
    assert result.data["scale"] == 1


def test_quotients(context):
    results = {r.check_id: r for r in QuotientCheck().run(context)}
    assert list(results) == [
        "isom.inclusion",
        "isom.quotient_new",
        "isom.quotient_ns",
        "isom.quotient_genus2",
        "isom.kernel",
    ]
    assert all(r.passed for r in results.values())
    assert results["isom.quotient_new"].data["group"] == "(Z/2Z)^2 x (Z/6Z)^2"
    assert results["isom.quotient_genus2"].data["factors"] == [1, 1, 3, 3]
    assert results["isom.kernel"].data["elementary_divisors"] == [2, 2, 2, 2, 3, 3]


def test_quotient_mismatch_is_reported(context, omega_x, lattices):
    omega_x.omega = _product(lattices, ("A", "D")) @ np.diag([1, 1, 3, 9])
    results = {r.check_id: r for r in QuotientCheck().run(context)}
    assert not results["isom.quotient_genus2"].passed
    assert results["isom.quotient_genus2"].data["factors"] == [1, 1, 3, 9]


def test_marked_point_reuses_built_generators(derivation, mocker):
    gens = derivation.generators()
    ctx = CheckContext(RunConfig())
    ctx.artifact("derivation", lambda: derivation)
    fresh = mocker.patch.object(artifacts, "Derivation")
    T, Z = artifacts.marked_point(ctx)
    fresh.assert_not_called()
    assert T.lead == gens.T.lead
    assert T.prec == min(gens.T.prec, artifacts.MARKED_TERMS)
    assert T.coefficient(T.lead) == gens.T.coefficient(gens.T.lead)
    assert ((2 * gens.Y + 1) * gens.T - Z).is_zero()


def test_ns_periods_selects_component_by_series_point(mocker):
    marked = object()
    mocker.patch.object(artifacts, "marked_point", return_value=marked)
    omega = mocker.patch.object(artifacts, "omega_ns", return_value="periods")
    ctx = CheckContext(RunConfig())
    assert artifacts.ns_periods(ctx) == "periods"
    assert omega.call_args.kwargs["marked"] is marked
