"""Shared fixtures: one exact derivation per test session."""

import pytest

from xns11.derive.constants import load_constants
from xns11.derive.pipeline import Derivation

ORDER = 80


@pytest.fixture(scope="session")
def constants():
    return load_constants()


@pytest.fixture(scope="session")
def derivation(constants):
    return Derivation(ORDER, constants)


@pytest.fixture(scope="session")
def jmap_coeffs():
    """j-map coefficients the series at ORDER are long enough to determine."""
    return (ORDER - 22) // 11 - 1
