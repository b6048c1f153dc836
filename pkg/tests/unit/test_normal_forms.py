"""Tests for Hermite and Smith normal forms."""

import math
import random

import numpy as np
import pytest

from xns11.lattices.normal_forms import (
    determinant,
    elementary_divisors,
    exgcd,
    group_string,
    hnf,
    snf,
)

# ── Fixtures ──────────────────────────────────────────────────────────


def _random_unimodular(n: int, rng: random.Random, steps: int = 30) -> np.ndarray:
    u = np.eye(n, dtype=object)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        u[i] += rng.randint(-3, 3) * u[j]
        if rng.random() < 0.2:
            u[[i, j]] = u[[j, i]]
    return u


def _check_snf(m: np.ndarray) -> tuple[int, ...]:
    result = snf(m)
    d = result.left @ np.array(m, dtype=object) @ result.right
    rows, cols = d.shape
    for i in range(rows):
        for j in range(cols):
            expected = result.factors[i] if i == j and i < len(result.factors) else 0
            assert d[i, j] == expected
    assert abs(determinant(result.left)) == 1
    assert (result.left @ result.left_inverse == np.eye(rows, dtype=object)).all()
    assert abs(determinant(result.right)) == 1
    for a, b in zip(result.factors, result.factors[1:]):
        assert a >= 0 and (b % a == 0 if a else b == 0)
    return result.factors


# ── Tests ─────────────────────────────────────────────────────────────


def test_exgcd_properties():
    rng = random.Random(7)
    pairs = [(0, 0), (0, 5), (5, 0), (-4, 6), (12, -18), (7, 21)]
    pairs += [(rng.randint(-500, 500), rng.randint(-500, 500)) for _ in range(50)]
    for a, b in pairs:
        m = exgcd(a, b)
        assert m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 1
        top, bottom = m @ np.array([a, b], dtype=object)
        assert top == math.gcd(a, b)
        assert bottom == 0


def test_exgcd_when_a_divides_b():
    assert list(exgcd(3, 12)[0]) == [1, 0]


def test_snf_small_cases():
    assert _check_snf(np.eye(4, dtype=object)) == (1, 1, 1, 1)
    assert _check_snf([[2, 0], [0, 6]]) == (2, 6)
    assert _check_snf([[6, 0], [0, 4]]) == (2, 12)
    assert _check_snf([[0, 0], [0, 3]]) == (3, 0)


def test_snf_rectangular():
    assert _check_snf([[2, 4, 4], [-6, 6, 12]]) == (2, 6)


def test_snf_is_basis_independent():
    rng = random.Random(121)
    base = np.diag(np.array([1, 1, 1, 1, 2, 2, 6, 6], dtype=object))
    for _ in range(5):
        m = _random_unimodular(8, rng) @ base @ _random_unimodular(8, rng)
        assert _check_snf(m) == (1, 1, 1, 1, 2, 2, 6, 6)
        assert abs(determinant(m)) == 144


def test_hnf_example():
    h, u = hnf([[2, 4], [3, 5]])
    assert h.tolist() == [[1, 1], [0, 2]]
    assert (u @ np.array([[2, 4], [3, 5]], dtype=object) == h).all()
    assert abs(determinant(u)) == 1


def test_hnf_is_canonical_under_row_operations():
    rng = random.Random(3)
    m = np.array([[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)], dtype=object)
    h1, _ = hnf(m)
    h2, _ = hnf(_random_unimodular(5, rng) @ m)
    assert (h1 == h2).all()


def test_elementary_divisors_refactor_the_kernel():
    assert elementary_divisors((1, 1, 1, 1, 2, 2, 6, 6)) == [2, 2, 2, 2, 3, 3]
    assert elementary_divisors((1, 1, 3, 3)) == [3, 3]


def test_group_string():
    assert group_string((1, 1, 1, 1, 2, 2, 6, 6)) == "(Z/2Z)^2 x (Z/6Z)^2"
    assert group_string((1, 1)) == "trivial"
    assert group_string((1, 3, 0)) == "Z/3Z x Z"


@pytest.mark.parametrize("factors", [(1, 2), (3, 3, 9)])
def test_snf_result_order(factors):
    result = snf(np.diag(np.array(factors, dtype=object)))
    assert result.order == math.prod(factors)
    assert result.nontrivial == tuple(d for d in factors if d != 1)
