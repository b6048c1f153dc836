"""Tests for plugin registries."""

import pytest

import xns11.checks  # noqa: F401
import xns11.reporters  # noqa: F401
from xns11.checks.registry import (
    PERIOD_TARGETS,
    VERIFY_SCOPES,
    checks_for_scope,
    get_check,
    list_checks,
)
from xns11.reporters.registry import get_reporter, list_reporters


def test_list_checks():
    names = list_checks()
    assert names[:7] == ["constants", "units", "generators", "cusps", "trace", "remarks", "maps"]
    assert "periods.xns11" in names
    assert "isom.gl8" in names


def test_list_reporters():
    names = list_reporters()
    assert "console" in names
    assert "json" in names


def test_get_check():
    check = get_check("trace")
    assert check.name == "trace"
    assert check.scope == "trace"


def test_registered_names_match_check_names():
    for name in list_checks():
        assert get_check(name).name == name


def test_get_reporter():
    reporter = get_reporter("console")
    assert reporter.name == "console"


def test_get_unknown_check():
    with pytest.raises(KeyError, match="Unknown check"):
        get_check("nonexistent")


def test_get_unknown_reporter():
    with pytest.raises(KeyError, match="Unknown reporter"):
        get_reporter("nonexistent")


def test_checks_for_scope():
    assert [c.name for c in checks_for_scope("units")] == ["constants", "units"]
    assert [c.name for c in checks_for_scope("generators")] == ["generators", "cusps"]
    assert [c.name for c in checks_for_scope("isom")] == ["isom.gl8", "isom.quotients"]


def test_all_is_every_verify_scope():
    scopes = {c.scope for c in checks_for_scope("all")}
    assert scopes == set(VERIFY_SCOPES)


@pytest.mark.parametrize("target", PERIOD_TARGETS)
def test_one_check_per_period_target(target):
    assert [c.name for c in checks_for_scope(target)] == [f"periods.{target}"]
