"""Tests for the covering maps and the differentials omega_A..omega_D."""

import pytest

from xns11.derive.differentials import (
    DIFFERENTIAL_SCALES,
    MAP_SOURCES,
    NORMALISER_VARIANTS,
    check_cuspforms,
    cuspform_normaliser,
    differentials,
    factorisation_holds,
    invariant_pullback,
    normalised_cuspform,
    symbolic_pullbacks,
    verify_differentials,
)

# ── Fixtures ──────────────────────────────────────────────────────────


@pytest.fixture(scope="module")
def gens(derivation):
    return derivation.generators()


@pytest.fixture(scope="module")
def diffs(gens):
    return differentials(gens)


# ── Tests ─────────────────────────────────────────────────────────────


def test_factorisation():
    assert factorisation_holds()


def test_symbolic_pullbacks():
    assert symbolic_pullbacks() == {"A": True, "D": True, "C": True}


def test_genus2_relation(gens, diffs):
    X = gens.X
    cubic_a = 4 * X**3 - 4 * X**2 - 28 * X + 41
    cubic_d = 4 * X**3 + 7 * X**2 - 6 * X + 19
    assert (diffs.Z * diffs.Z + cubic_a * cubic_d).is_zero()


@pytest.mark.parametrize("label", sorted(DIFFERENTIAL_SCALES))
def test_invariant_pullback(gens, diffs, label):
    assert (invariant_pullback(label, gens, diffs) - diffs.omega[label]).is_zero()


@pytest.mark.parametrize("label", ["A", "B", "C", "D"])
def test_cuspforms_start_at_q(diffs, constants, label):
    f = normalised_cuspform(label, diffs, constants)
    assert f.valuation == 1
    assert f.leading_coefficient() == 1


def test_verify_differentials(gens, constants):
    results = verify_differentials(gens, constants)
    ids = [r.check_id for r in results]
    assert ids[: len(MAP_SOURCES)] == [f"maps.{name}" for name in MAP_SOURCES]
    assert ids[len(MAP_SOURCES):] == [
        "maps.x_formula",
        "maps.tdt",
        "maps.factorisation",
        "maps.omega_c",
        "maps.multiples",
        "maps.pullbacks_exact",
        "maps.pullbacks",
        "maps.cuspforms",
    ]
    assert [r.check_id for r in results if not r.passed] == []


def test_cuspform_normaliser_variants(diffs, constants):
    exchanged = next(iter(NORMALISER_VARIANTS))
    variants = {
        label: cuspform_normaliser(label, diffs, constants)[1] for label in "ABCD"
    }
    assert variants == {"A": None, "B": exchanged, "C": exchanged, "D": None}

    result = check_cuspforms(diffs, constants)
    assert result.passed
    assert result.data["normaliser_variants"] == {"B": exchanged, "C": exchanged}
    assert "B holds with" in result.detail


def test_tabulated_normaliser_is_kept_when_it_works(diffs, constants):
    normaliser, variant = cuspform_normaliser("A", diffs, constants)
    assert variant is None
    assert normaliser == constants.cuspforms["A"].normaliser
