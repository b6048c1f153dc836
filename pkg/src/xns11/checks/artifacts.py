"""Numerical artifacts shared by the period and isomorphism checks."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import mpmath
import numpy as np

from xns11.arith.qexp import QSeries
from xns11.core.check import CheckContext
from xns11.curves.agm import EllipticLattice, agm_lattice
from xns11.curves.ellmaps import CURVES
from xns11.curves.riemann import PeriodMatrix, omega_genus2, omega_ns
from xns11.derive.pipeline import Derivation
from xns11.modular.msym import LABELS, AnTable, OmegaNew, an_table, omega_new
from xns11.utils.cache import AnCache

logger = logging.getLogger(__name__)

# series precision of the point that marks the X_ns(11) component
MARKED_ORDER = 80
MARKED_TERMS = 40


def an_tables(ctx: CheckContext) -> dict[str, AnTable]:
    cfg = ctx.config

    def build() -> dict[str, AnTable]:
        cache = AnCache(cfg.cache_dir)
        return {
            label: an_table(label, cfg.numeric.nmax, cache, cfg.max_workers) for label in LABELS
        }

    return ctx.artifact("an_tables", build)


def elliptic_lattices(ctx: CheckContext) -> dict[str, EllipticLattice]:
    bits = ctx.config.numeric.elliptic_bits
    return ctx.artifact(
        "elliptic_lattices", lambda: {label: agm_lattice(CURVES[label], bits) for label in LABELS}
    )


def new_periods(ctx: CheckContext) -> OmegaNew:
    return ctx.artifact(
        "omega_new",
        lambda: omega_new(an_tables(ctx), ctx.config.numeric.tol, elliptic_lattices(ctx)),
    )


def marked_point(ctx: CheckContext) -> tuple[QSeries, QSeries]:
    """(T, Z = (2Y + 1) T) as q_*-series: the point that picks the component of the plane
    model. Reuses the run's derivation when its generators exist, else a short one."""

    def build() -> tuple[QSeries, QSeries]:
        if "derivation" in ctx.built() and ctx.derivation.has_stage("generators"):
            derivation = ctx.derivation
        else:
            derivation = Derivation(MARKED_ORDER)
        gens = derivation.generators()
        T = gens.T.truncate(min(gens.T.prec, MARKED_TERMS))
        Y = gens.Y.truncate(min(gens.Y.prec, MARKED_TERMS))
        return T, (2 * Y + 1) * T

    return ctx.artifact("marked_point", build)


def ns_periods(ctx: CheckContext) -> PeriodMatrix:
    n = ctx.config.numeric
    return ctx.artifact(
        "omega_ns",
        lambda: omega_ns(
            n.tol,
            n.bits,
            marked=marked_point(ctx),
            standoff=n.standoff,
            max_workers=ctx.config.max_workers,
        ),
    )


def genus2_periods(ctx: CheckContext) -> PeriodMatrix:
    n = ctx.config.numeric
    return ctx.artifact(
        "omega_genus2",
        lambda: omega_genus2(
            n.tol, n.bits, standoff=n.standoff, max_workers=ctx.config.max_workers
        ),
    )


def complex_rows(matrix: np.ndarray) -> list[list[list[float]]]:
    """A complex matrix as [re, im] pairs, for the JSON report."""
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(matrix)]


def row_membership(
    omega: np.ndarray, labels: tuple[str, ...], lattices: dict[str, EllipticLattice],
    rel_tol: float,
) -> tuple[int, float, str | None]:
    """(entries inside their row's lattice, worst relative distance, first entry outside)."""
    inside, worst, first = 0, 0.0, None
    for label, row in zip(labels, np.asarray(omega, dtype=complex)):
        for j, value in enumerate(row):
            dist = float(lattices[label].distance(mpmath.mpc(complex(value))))
            worst = max(worst, dist)
            if dist <= rel_tol:
                inside += 1
            elif first is None:
                first = f"{label}[{j}]"
    return inside, worst, first


def write_audit(ctx: CheckContext, name: str, payload: dict[str, Any]) -> Path:
    """Write an audit record next to the reports."""
    path = Path(ctx.config.results_dir) / f"audit_{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    logger.info("Audit record written to %s", path)
    return path
