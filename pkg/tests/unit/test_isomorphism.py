"""Tests for lattice reconstruction, quotients and the GL(2g, Z) search."""

import random

import mpmath
import numpy as np
import pytest

from xns11.core.errors import ConvergenceError, ReconstructionError
from xns11.curves.agm import EllipticLattice
from xns11.lattices.isomorphism import (
    RealLattice,
    fit_row_scales,
    gl8_check,
    gl_check,
    product_lattice,
    quotient,
    reconstruct,
    scaled_product,
)

# ── Fixtures ──────────────────────────────────────────────────────────


def _elliptic(w1: complex, w2: complex) -> EllipticLattice:
    return EllipticLattice(mpmath.mpc(w1), mpmath.mpc(w2))


@pytest.fixture
def factors():
    return [
        _elliptic(1.7, 0.3 + 2.1j),
        _elliptic(0.9, -0.4 + 1.3j),
        _elliptic(2.2, 1.1 + 3.4j),
        _elliptic(1.05, 0.5 + 0.8j),
    ]


@pytest.fixture
def product(factors):
    return product_lattice(factors, "E^4")


def _random_unimodular(n: int, rng: random.Random) -> np.ndarray:
    u = np.eye(n, dtype=int)
    for _ in range(25):
        i, j = rng.sample(range(n), 2)
        u[i] += rng.randint(-2, 2) * u[j]
    return u


# ── Tests ─────────────────────────────────────────────────────────────


def test_singular_basis_rejected():
    with pytest.raises(ConvergenceError, match="singular"):
        RealLattice(np.zeros((2, 2)), "zero")


def test_from_complex_roundtrip(product):
    assert product.rank == 8
    again = RealLattice.from_complex(product.to_complex())
    assert np.allclose(again.basis, product.basis)


def test_reconstruct_identity_and_double(product):
    c = reconstruct(product, product)
    assert (c == np.eye(8, dtype=int)).all()
    doubled = RealLattice(2 * product.basis, "2E^4")
    assert (reconstruct(doubled, product) == 2 * np.eye(8, dtype=int)).all()


def test_reconstruct_rational_entries(product):
    third = RealLattice(product.basis / 3, "E^4/3")
    c = reconstruct(third, product, max_den=10)
    assert c[0, 0] == pytest.approx(1 / 3)
    with pytest.raises(ReconstructionError):
        quotient(third, product)


def test_reconstruct_rejects_noise(product):
    rng = np.random.default_rng(11)
    noisy = RealLattice(product.basis @ rng.normal(size=(8, 8)), "noise")
    with pytest.raises(ReconstructionError):
        reconstruct(noisy, product, tol=1e-8, max_den=5)


def test_quotient_structure(product):
    rng = random.Random(5)
    inclusion = (
        _random_unimodular(8, rng)
        @ np.diag([1, 1, 1, 1, 2, 2, 6, 6])
        @ _random_unimodular(8, rng)
    )
    sub = RealLattice(product.basis @ inclusion, "sub")
    result = quotient(sub, product)
    assert result.factors == (1, 1, 1, 1, 2, 2, 6, 6)
    assert result.order == 144
    assert result.elementary_divisors() == [2, 2, 2, 2, 3, 3]


def test_gl8_check_against_itself(product):
    omega = product.to_complex()
    witness = gl8_check(omega, omega)
    assert witness.success
    assert witness.signs == (1, 1, 1, 1)
    assert (witness.matrix == np.eye(8, dtype=int)).all()
    assert witness.det == 1


def test_gl8_check_recovers_signs_and_matrix(product):
    rng = random.Random(8)
    omega = product.to_complex()
    m = _random_unimodular(8, rng)
    signs = np.array([1, -1, -1, 1])
    target = (signs[:, None] * omega) @ m
    witness = gl8_check(omega, target, max_workers=4)
    assert witness.success
    s = np.array(witness.signs)[:, None]
    assert np.allclose((s * omega) @ witness.matrix.astype(float), target)
    assert len(witness.attempts) == 16


def test_gl8_check_row_scale(product):
    omega = product.to_complex()
    witness = gl8_check(4 * omega, omega, scales=(1, 4))
    assert witness.success and witness.scale == 4


def test_gl8_check_negative_control(product):
    omega = product.to_complex()
    perturbed = omega.copy()
    perturbed[2, 5] += 1e-2
    witness = gl8_check(omega, perturbed)
    assert not witness.success
    assert witness.residual > 1e-4


def test_gl_check_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        gl_check(np.ones((2, 4)), np.ones((4, 8)))


def test_fit_row_scales(factors, product):
    omega = product.to_complex()
    assert fit_row_scales(omega, factors) == (1, 1, 1, 1)
    assert fit_row_scales(4 * omega, factors) == (4, 4, 4, 4)
    mixed = omega.copy()
    mixed[2] *= 4
    assert fit_row_scales(mixed, factors) == (1, 1, 4, 1)


def test_fit_row_scales_rejects_foreign_row(factors, product):
    omega = product.to_complex()
    omega[0, 0] *= 1.5
    with pytest.raises(ReconstructionError, match="row 0"):
        fit_row_scales(omega, factors)


def test_quotient_against_scaled_product(factors, product):
    sub = RealLattice(4 * product.basis @ np.diag([1, 1, 1, 1, 1, 1, 3, 3]), "sub")
    big = scaled_product(factors, (4, 4, 4, 4), "4E^4")
    assert quotient(sub, big).factors == (1, 1, 1, 1, 1, 1, 3, 3)
