"""The versioned table of exact constants used by the derivation."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Sequence

import yaml

from xns11.arith.cyclo import CycElem, eps_coords, sqrt_m11
from xns11.core.errors import IdentityError, NotInSubfieldError
from xns11.core.models import CheckResult

logger = logging.getLogger(__name__)

_PACKAGE_DIR = Path(__file__).parent
CONSTANTS_PATH = _PACKAGE_DIR / "data" / "constants.yaml"
CONSTANTS_SHA256 = "30e986eb004cfe593020a1cf32126f09b59fd8456ae0095ddcff41c0475d9af0"
SCHEMA_VERSION = 1

_SCALAR_SECTIONS = (
    "unit_relation",
    "unit_product",
    "hat",
    "generators",
    "uv_polynomial_times_11",
)


def eps_element(coords: Sequence[int | str]) -> CycElem:
    return CycElem.from_eps([Fraction(c) for c in coords])


@dataclass(frozen=True)
class Cuspform:
    """Normaliser and first coefficients (q^1 .. q^6) of one normalised cuspform."""

    label: str
    normaliser: CycElem
    table: tuple[CycElem, ...]


@dataclass(frozen=True)
class ConstantTable:
    """Every constant of the derivation as an exact element of Q(zeta)."""

    values: dict[str, CycElem]
    t_hat: CycElem
    nu: tuple[CycElem, ...]
    theta: tuple[CycElem, ...]
    denominator_px: tuple[int, ...]
    denominator_qx: tuple[int, ...]
    f1: tuple[CycElem, ...]
    f2: tuple[CycElem, ...]
    cusp_x: dict[int, CycElem]
    cusp_y: dict[int, CycElem]
    hat_x: dict[int, CycElem]
    hat_y: dict[int, CycElem]
    eps_conjugates: tuple[CycElem, ...]
    x_of_z: tuple[Fraction, ...]
    y_of_z: tuple[Fraction, ...]
    sigma: dict[int, int]
    fourier: dict[str, tuple[CycElem, ...]]
    cuspforms: dict[str, Cuspform]
    raw: dict[str, Any]
    digest: str

    def __getitem__(self, key: str) -> CycElem:
        """Scalar constants by ``section.name``, e.g. ``hat.x0``."""
        if key not in self.values:
            raise KeyError(f"Unknown constant: {key!r}. Available: {sorted(self.values)}")
        return self.values[key]

    @property
    def a(self) -> CycElem:
        return self["uv_polynomial_times_11.a"] * Fraction(1, 11)

    def uv(self, name: str) -> CycElem:
        """b0, b1, b2, c0, c1 of the U + aV polynomial (unscaled)."""
        return self[f"uv_polynomial_times_11.{name}"] * Fraction(1, 11)


def _normaliser(entry: dict[str, Any], shape: dict[str, Any] | None = None) -> CycElem:
    """rational * sqrt(-11)? * (eps - 2)^k * factors, with k and the factors read from
    ``shape`` when it is given."""
    shape = entry if shape is None else shape
    out = CycElem.from_scalar(Fraction(str(entry["rational"])))
    if entry.get("sqrt_m11"):
        out = out * sqrt_m11()
    out = out * (CycElem.epsilon() - 2) ** int(shape.get("eps_minus_two", 0))
    for f in shape.get("factors", []):
        out = out * eps_element(f)
    return out


def exchanged_normalisers(table: ConstantTable, first: str, second: str) -> dict[str, CycElem]:
    """Cuspform normalisers with the (eps - 2) powers and the polynomial factors of two
    labels exchanged. The rational part and the sqrt(-11) flag stay with each label."""
    raw = table.raw["cuspforms"]
    out = {label: cf.normaliser for label, cf in table.cuspforms.items()}
    out[first] = _normaliser(raw[first], raw[second])
    out[second] = _normaliser(raw[second], raw[first])
    return out


def parse_constants(data: dict[str, Any], digest: str = "") -> ConstantTable:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise IdentityError(
            "constants.schema", f"unsupported schema version {data.get('schema_version')!r}"
        )
    values = {
        f"{section}.{name}": eps_element(coords)
        for section in _SCALAR_SECTIONS
        for name, coords in data[section].items()
    }
    cusps = data["cusps"]
    return ConstantTable(
        values=values,
        t_hat=eps_element(data["t_hat_times_11"]) * Fraction(1, 11),
        nu=tuple(eps_element(c) for c in data["conjugates"]["nu"]),
        theta=tuple(eps_element(c) for c in data["conjugates"]["theta"]),
        denominator_px=tuple(int(c) for c in data["trace_denominator"]["px"]),
        denominator_qx=tuple(int(c) for c in data["trace_denominator"]["qx"]),
        f1=tuple(eps_element(c) for c in data["norm_polynomials"]["f1"]),
        f2=tuple(eps_element(c) for c in data["norm_polynomials"]["f2"]),
        cusp_x={int(k): eps_element(v) for k, v in cusps["X"].items()},
        cusp_y={int(k): eps_element(v) for k, v in cusps["Y"].items()},
        hat_x={int(k): eps_element(v) for k, v in cusps["X_hat"].items()},
        hat_y={int(k): eps_element(v) for k, v in cusps["Y_hat"].items()},
        eps_conjugates=tuple(eps_element(z) for z in cusps["eps_conjugates"]),
        x_of_z=tuple(Fraction(c) for c in cusps["x_of_z"]),
        y_of_z=tuple(Fraction(c) for c in cusps["y_of_z"]),
        sigma={int(k): int(v) for k, v in cusps["sigma"].items()},
        fourier={
            name: tuple(eps_element(c) for c in rows) for name, rows in data["fourier"].items()
        },
        cuspforms={
            label: Cuspform(
                label, _normaliser(entry), tuple(eps_element(c) for c in entry["table"])
            )
            for label, entry in data["cuspforms"].items()
        },
        raw=data,
        digest=digest,
    )


def load_constants(path: str | Path | None = None, pinned: bool = True) -> ConstantTable:
    """Load the constants file, refusing a file whose digest differs from the pinned one."""
    if path is None:
        return _default_table()
    return _load(Path(path), pinned)


@lru_cache(maxsize=1)
def _default_table() -> ConstantTable:
    return _load(CONSTANTS_PATH, True)


def _load(path: Path, pinned: bool) -> ConstantTable:
    if not path.exists():
        raise FileNotFoundError(f"Constants file not found: {path}")
    blob = path.read_bytes()
    digest = hashlib.sha256(blob).hexdigest()
    if pinned and digest != CONSTANTS_SHA256:
        raise IdentityError(
            "constants.digest", f"{path} has digest {digest}, expected {CONSTANTS_SHA256}"
        )
    data = yaml.safe_load(blob) or {}
    logger.debug("loaded constants from %s (sha256 %s)", path, digest[:12])
    return parse_constants(data, digest)


# ── Consistency of the table ──────────────────────────────────────────


def _entries(table: ConstantTable) -> list[tuple[str, CycElem, Sequence[Any]]]:
    raw = table.raw
    out = []
    for key, value in table.values.items():
        section, name = key.split(".")
        out.append((key, value, raw[section][name]))
    tables = {"X": table.cusp_x, "Y": table.cusp_y, "X_hat": table.hat_x, "Y_hat": table.hat_y}
    for name, values in tables.items():
        for k, coords in raw["cusps"][name].items():
            out.append((f"cusps.{name}.{k}", values[int(k)], coords))
    for name, rows in raw["fourier"].items():
        for n, coords in enumerate(rows):
            out.append((f"fourier.{name}.{n}", table.fourier[name][n], coords))
    return out


def verify_constants(table: ConstantTable) -> list[CheckResult]:
    """Every entry lies in Q(eps), and the tables agree wherever they overlap."""
    bad = None
    for key, value, coords in _entries(table):
        try:
            back = eps_coords(value)
        except NotInSubfieldError:
            bad = key
            break
        padded = [Fraction(c) for c in coords] + [Fraction(0)] * (5 - len(coords))
        if list(back) != padded:
            bad = key
            break
    results = [
        CheckResult.from_bool(
            "constants.real_subfield",
            "every tabulated constant lies in Q(eps)",
            bad is None,
            detail="" if bad is None else f"{bad} does not round-trip through Q(eps)",
            first_failing=bad,
            digest=table.digest,
        )
    ]

    results.append(CheckResult.from_bool(
        "constants.t_hat",
        "coefficient of V in That is minus a",
        table.t_hat == -table.a,
    ))

    hat_ok = (
        table["hat.x0"] == table.hat_x[3]
        and table["hat.x0"] == table.hat_x[5]
        and table["hat.y0"] == table.hat_y[3]
    )
    results.append(CheckResult.from_bool(
        "constants.hat_at_zeros",
        "Xhat, Yhat at the zeros of the units equal their constant terms",
        hat_ok,
    ))

    base = table.cusp_x[1]
    base_ok = (
        base == table["generators.alpha2"]
        and base == table["generators.pole"]
        and table.cusp_y[1] == table["generators.gamma3"]
        and table.fourier["X"][0] == base
        and table.fourier["Y"][0] == table.cusp_y[1]
    )
    results.append(CheckResult.from_bool(
        "constants.cusp_base",
        "value at the cusp at infinity agrees across the tables",
        base_ok,
    ))

    results.append(CheckResult.from_bool(
        "constants.uv_leading",
        "leading terms of U + aV and of c1 X Y agree",
        table.uv("c1") - table.a == 1,
    ))
    return results
