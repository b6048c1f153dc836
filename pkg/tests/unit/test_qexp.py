"""Tests for truncated q-series."""

import random
from fractions import Fraction

import pytest

from xns11.arith.cyclo import SIGMA, CycElem
from xns11.arith.qexp import (
    QSeries,
    eval_poly,
    first_disagreement,
    qs_derive,
    qs_inv,
    qs_normalize,
)
from xns11.core.errors import IncompatibleSeriesError

# ── Fixtures ──────────────────────────────────────────────────────────


def _random_coeffs(rng: random.Random, n: int, bound: int) -> list[CycElem]:
    return [CycElem(rng.randint(-bound, bound) for _ in range(10)) for _ in range(n)]


def _naive_product(a: list[CycElem], b: list[CycElem], n: int) -> list[CycElem]:
    out = []
    for k in range(n):
        acc = CycElem.zero()
        for i in range(k + 1):
            acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


# ── Tests ─────────────────────────────────────────────────────────────


def test_geometric_series_inverse():
    f = QSeries(0, [1, -1], 12)
    g = qs_inv(f)
    assert g.prec == 12
    assert all(c == 1 for c in g.coeffs)


def test_product_matches_naive_convolution():
    rng = random.Random(17)
    for bound in (3, 10**6, 2**90):
        a = _random_coeffs(rng, 9, bound)
        b = _random_coeffs(rng, 7, bound)
        a[0] = a[0] + 1 if a[0].is_zero() else a[0]
        b[0] = b[0] + 1 if b[0].is_zero() else b[0]
        prod = QSeries(0, a) * QSeries(0, b)
        assert prod.prec == 7
        assert prod.coeffs == _naive_product(a, b, 7)


def test_product_with_denominators():
    half = CycElem([Fraction(1, 2), 0, Fraction(-1, 3)])
    f = QSeries(0, [half, 1, CycElem.zeta_power(4)])
    g = QSeries(0, [CycElem.zeta_power(7), Fraction(5, 6), 2])
    assert (f * g).coeffs == _naive_product(f.coeffs, g.coeffs, 3)


def test_inverse_round_trip():
    rng = random.Random(23)
    coeffs = _random_coeffs(rng, 15, 20)
    coeffs[0] = CycElem.zeta_power(3) + 2
    f = QSeries(Fraction(3, 11), coeffs)
    prod = f * qs_inv(f)
    assert prod.lead == 0
    assert prod.prec == 15
    assert prod.coefficient(0) == 1
    assert all(prod.coefficient(k).is_zero() for k in range(1, 15))


def test_fractional_leads_add():
    f = QSeries.monomial(1, Fraction(1, 11), 5)
    g = QSeries.monomial(CycElem.zeta_power(2), Fraction(2, 11), 5)
    assert (f * g).lead == Fraction(3, 11)
    assert (f * g).order == Fraction(3, 11) + 5


def test_incompatible_fractional_parts():
    f = QSeries.monomial(1, Fraction(1, 11), 5)
    g = QSeries.constant(1, 5)
    with pytest.raises(IncompatibleSeriesError):
        f + g


def test_lead_denominator_must_divide_132():
    with pytest.raises(IncompatibleSeriesError):
        QSeries(Fraction(1, 7), [1])


def test_sum_truncates_to_lower_order():
    f = QSeries(0, [1, 2, 3, 4, 5, 6])
    g = QSeries(2, [1, 1])
    s = f + g
    assert s.order == 4
    assert [s.coefficient(k) for k in range(4)] == [1, 2, 4, 5]


def test_leading_cancellation_raises_valuation():
    f = QSeries(0, [1, 2, 3])
    g = QSeries(0, [1, 2, 5])
    d = f - g
    assert d.lead == 2
    assert d.coefficient(2) == -2
    assert first_disagreement(f, g) == 2
    assert first_disagreement(f, f) is None


def test_zero_series_keeps_precision():
    f = QSeries(0, [1, 2, 3, 4])
    z = f - f
    assert z.is_zero()
    assert z.order == 4
    with pytest.raises(IncompatibleSeriesError):
        z.valuation


def test_coefficient_beyond_precision_raises():
    f = QSeries(1, [1, 1])
    assert f.coefficient(0).is_zero()
    with pytest.raises(IncompatibleSeriesError):
        f.coefficient(3)
    with pytest.raises(IncompatibleSeriesError):
        f.coefficient(Fraction(3, 2))


def test_derivative_with_fractional_lead():
    f = QSeries(Fraction(1, 11), [1, 2, 3])
    df = qs_derive(f)
    assert df.lead == Fraction(-10, 11)
    assert df.coefficient(Fraction(-10, 11)) == Fraction(1, 11)
    assert df.coefficient(Fraction(1, 11)) == 2 * Fraction(12, 11)
    assert df.coefficient(Fraction(12, 11)) == 3 * Fraction(23, 11)


def test_derivative_drops_constant_term():
    f = QSeries(0, [5, 1, 1])
    df = qs_derive(f)
    assert df.lead == 0
    assert df.coeffs == [1, 2]


def test_galois_action_is_coefficientwise():
    rng = random.Random(29)
    coeffs = _random_coeffs(rng, 6, 9)
    coeffs[0] = coeffs[0] + 100
    f = QSeries(0, coeffs)
    assert f.galois_apply(SIGMA).coeffs == [SIGMA(c) for c in coeffs]


def test_scale_by_cyclotomic_element():
    z = CycElem.zeta_power(5)
    f = QSeries(0, [1, CycElem.zeta_power(7), 3])
    assert f.scale(z).coeffs == [z, CycElem.zeta_power(1), 3 * z]
    g, c = qs_normalize(f.scale(z))
    assert c == z
    assert g.coeffs == f.coeffs


def test_power_and_polynomial_evaluation():
    q = QSeries.monomial(1, 1, 6)
    one_plus_q = q + 1
    assert (one_plus_q**2).coeffs[:3] == [1, 2, 1]
    assert (one_plus_q**0).coeffs[0] == 1
    p = eval_poly([1, 2, 1], q)
    assert [p.coefficient(k) for k in range(3)] == [1, 2, 1]
    assert (one_plus_q**-1).coefficient(3) == -1


def test_text_format():
    f = QSeries(Fraction(1, 11), [CycElem([Fraction(1, 2), -3]), 0, CycElem.zeta_power(9)])
    text = f.dumps()
    assert text.startswith("# lead=1/11 prec=3")
    g = QSeries.loads(text)
    assert g.lead == f.lead
    assert g.prec == f.prec
    assert first_disagreement(f, g) is None
