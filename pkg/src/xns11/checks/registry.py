"""Check registry."""

from __future__ import annotations

from xns11.core.check import Check

VERIFY_SCOPES = ("units", "generators", "trace", "remarks", "maps")
PERIOD_TARGETS = ("x0121-new", "xns11", "genus2")

_CHECKS: dict[str, type[Check]] = {}


def register_check(name: str, cls: type[Check]) -> None:
    """Register a check class by name."""
    _CHECKS[name] = cls


def get_check(name: str) -> Check:
    """Instantiate and return a check by name."""
    if name not in _CHECKS:
        raise KeyError(f"Unknown check: {name!r}. Available: {list(_CHECKS.keys())}")
    return _CHECKS[name]()


def list_checks() -> list[str]:
    """Return all registered check names."""
    return list(_CHECKS.keys())


def checks_for_scope(scope: str) -> list[Check]:
    """Checks of one scope in registration order; ``all`` means every verify scope."""
    wanted = set(VERIFY_SCOPES) if scope == "all" else {scope}
    checks = [cls() for cls in _CHECKS.values()]
    return [c for c in checks if c.scope in wanted]
