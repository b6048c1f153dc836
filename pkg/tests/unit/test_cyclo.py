"""Tests for Q(zeta_11) arithmetic."""

import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from xns11.arith.cyclo import (
    COMPLEX_CONJUGATION,
    IDENTITY,
    SIGMA,
    CycElem,
    eps_coords,
    sqrt_in_real_subfield,
    sqrt_m11,
)
from xns11.core.errors import NotInSubfieldError

# ── Fixtures ──────────────────────────────────────────────────────────


def _random_elem(rng: random.Random, bound: int = 50) -> CycElem:
    return CycElem(rng.randint(-bound, bound) for _ in range(10))


def _sympy_product(a: CycElem, b: CycElem) -> list[Fraction]:
    x = sympy.Symbol("x")
    pa = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(a.coords))
    pb = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(b.coords))
    r = sympy.Poly(sympy.rem(sympy.expand(pa * pb), sympy.cyclotomic_poly(11, x), x), x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(r.all_coeffs())]
    return coeffs + [Fraction(0)] * (10 - len(coeffs))


# ── Tests ─────────────────────────────────────────────────────────────


def test_zeta_has_order_eleven():
    z = CycElem.zeta_power(1)
    assert z**11 == 1
    assert z**5 != 1
    assert CycElem.zeta_power(12) == z


def test_zeta_powers_sum_to_zero():
    total = CycElem.zero()
    for k in range(11):
        total = total + CycElem.zeta_power(k)
    assert total.is_zero()


def test_epsilon_minimal_polynomial():
    e = CycElem.epsilon()
    assert e**5 + e**4 - 4 * e**3 - 3 * e**2 + 3 * e + 1 == 0
    assert e.conjugate() == e


def test_product_matches_sympy_reduction():
    rng = random.Random(11)
    for _ in range(5):
        a, b = _random_elem(rng), _random_elem(rng)
        assert list((a * b).coords) == _sympy_product(a, b)


def test_inverse_and_division():
    rng = random.Random(3)
    for _ in range(5):
        a = _random_elem(rng)
        if a.is_zero():
            continue
        assert a * (1 / a) == 1
        assert (a * 7) / a == 7


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CycElem.zero() ** -1


def test_rational_denominators_are_reduced():
    a = CycElem([Fraction(1, 2), Fraction(1, 3)])
    assert a.denominator == 6
    assert a * 6 == CycElem([3, 2])
    assert CycElem([2, 4], den=4) == CycElem([Fraction(1, 2), 1])


def test_trace_and_norm():
    z = CycElem.zeta_power(1)
    assert CycElem.one().trace() == 10
    assert z.trace() == -1
    assert (z - 1).norm() == 11
    assert CycElem.from_scalar(3).norm() == 3**10


def test_gauss_sum_squares_to_minus_eleven():
    s = sqrt_m11()
    assert s * s == -11
    assert s.embed().imag > 0
    with mpmath.workprec(256):
        assert abs(s.embed(1, 256) - mpmath.mpc(0, mpmath.sqrt(11))) < mpmath.mpf(10) ** -60


def test_galois_action_on_gauss_sum():
    s = sqrt_m11()
    assert SIGMA(s) == s
    assert COMPLEX_CONJUGATION(s) == -s
    assert SIGMA**5 == IDENTITY
    assert SIGMA.compose(SIGMA) == SIGMA**2


def test_sigma_permutes_real_conjugates():
    e = CycElem.epsilon()
    # sigma sends zeta to zeta^9, hence eps to zeta^9 + zeta^2
    assert SIGMA(e) == CycElem.zeta_power(2) + CycElem.zeta_power(9)
    assert eps_coords(SIGMA(e)) == (-2, 0, 1, 0, 0)


def test_eps_coords_inverts_from_eps():
    rng = random.Random(5)
    for _ in range(5):
        coeffs = [Fraction(rng.randint(-30, 30), rng.randint(1, 4)) for _ in range(5)]
        assert eps_coords(CycElem.from_eps(coeffs)) == tuple(coeffs)


def test_eps_coords_rejects_non_real():
    with pytest.raises(NotInSubfieldError):
        eps_coords(CycElem.zeta_power(1))


def test_sqrt_in_real_subfield():
    a = CycElem.from_eps([1, 2, 0, -1, 1])
    root = sqrt_in_real_subfield(a * a)
    assert root is not None
    assert root == a or root == -a
    half = CycElem.from_eps([Fraction(1, 3), 1])
    root = sqrt_in_real_subfield(half * half)
    assert root is not None
    assert root * root == half * half


def test_sqrt_in_real_subfield_non_square():
    # eps is negative at some real embedding
    assert sqrt_in_real_subfield(CycElem.epsilon()) is None
    assert sqrt_in_real_subfield(CycElem.from_scalar(2)) is None


def test_json_form():
    a = CycElem([Fraction(-1, 2), 3, 0, 5])
    data = a.to_json()
    assert data[0] == "-1/2"
    assert CycElem.from_json(data) == a
