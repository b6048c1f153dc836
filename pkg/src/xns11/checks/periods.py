"""Period matrices of J_0(121)^new, X_ns(11) and its genus-2 quotient."""

from __future__ import annotations

import numpy as np

from xns11.checks.artifacts import (
    complex_rows,
    elliptic_lattices,
    genus2_periods,
    new_periods,
    ns_periods,
    row_membership,
    write_audit,
)
from xns11.core.check import Check, CheckContext
from xns11.core.errors import ReconstructionError
from xns11.core.models import CheckResult
from xns11.curves.riemann import PeriodMatrix
from xns11.lattices.isomorphism import fit_row_scales
from xns11.modular.msym import LABELS

STABILITY_TOL = 1e-8


class NewPeriodsCheck(Check):
    """Integrals of f_A..f_D along the eight modular symbols."""

    @property
    def name(self) -> str:
        return "periods.x0121-new"

    @property
    def scope(self) -> str:
        return "x0121-new"

    def run(self, context: CheckContext) -> list[CheckResult]:
        omega = new_periods(context)
        tol = context.config.numeric.membership_tol_new
        rank = int(np.linalg.matrix_rank(omega.real_stack()))
        inside, worst, first = row_membership(
            omega.matrix, LABELS, elliptic_lattices(context), tol
        )
        if context.audit:
            write_audit(context, "x0121-new", {
                "paths": [str(p) for p in omega.paths],
                "n_used": [[pv.n_used for pv in row] for row in omega.entries],
                "tail_bound": [[pv.tail_bound for pv in row] for row in omega.entries],
                "stability": omega.stability.tolist(),
            })
        return [
            CheckResult.from_bool(
                "periods.x0121-new.shape",
                "4 x 8 period matrix of full real rank",
                omega.matrix.shape == (4, 8) and rank == 8,
                first_failing=None if rank == 8 else f"rank {rank}",
                matrix=complex_rows(omega.matrix),
            ),
            CheckResult.from_bool(
                "periods.x0121-new.stability",
                "entries stable under doubling the number of coefficients",
                omega.max_stability < STABILITY_TOL,
                max_delta=omega.max_stability,
            ),
            CheckResult.from_bool(
                "periods.x0121-new.membership",
                "every period of f_L lies in the AGM lattice of E_L",
                inside == omega.matrix.size,
                first_failing=first,
                inside=inside,
                worst_distance=worst,
            ),
        ]


def _periods_results(
    context: CheckContext, target: str, periods: PeriodMatrix, genus: int
) -> list[CheckResult]:
    tol = context.config.numeric.membership_tol_ns
    lattices = elliptic_lattices(context)
    inside, worst, first = row_membership(periods.omega, periods.labels, lattices, tol)
    try:
        scales: list[int] | None = list(fit_row_scales(
            periods.omega,
            [lattices[label] for label in periods.labels],
            context.config.numeric.scales,
            tol,
        ))
    except ReconstructionError:
        scales = None
    if context.audit:
        write_audit(context, target, periods.audit())
    mono = periods.monodromy
    return [
        CheckResult.from_bool(
            f"periods.{target}.genus",
            "genus from the monodromy and from the homology basis",
            mono.genus == genus and periods.genus == genus,
            first_failing=None if mono.genus == genus else f"genus {mono.genus}",
            genus=mono.genus,
            loops=len(mono.loops),
            nontrivial_loops=len(mono.nontrivial),
        ),
        CheckResult.from_bool(
            f"periods.{target}.quality",
            "periods stable under panel doubling, null-homologous cycles integrate to zero",
            max(periods.stability, periods.null_residual) <= 10 * context.config.numeric.tol,
            stability=periods.stability,
            null_residual=periods.null_residual,
        ),
        CheckResult.from_bool(
            f"periods.{target}.membership",
            "every period of omega_L lies in the AGM lattice of E_L",
            inside == periods.omega.size,
            first_failing=first,
            inside=inside,
            worst_distance=worst,
            row_scales=scales,
            matrix=complex_rows(periods.omega),
        ),
    ]


class NsPeriodsCheck(Check):
    """Periods of omega_A..omega_D over a homology basis of X_ns(11)."""

    @property
    def name(self) -> str:
        return "periods.xns11"

    @property
    def scope(self) -> str:
        return "xns11"

    def run(self, context: CheckContext) -> list[CheckResult]:
        return _periods_results(context, "xns11", ns_periods(context), 4)


class Genus2PeriodsCheck(Check):
    @property
    def name(self) -> str:
        return "periods.genus2"

    @property
    def scope(self) -> str:
        return "genus2"

    def run(self, context: CheckContext) -> list[CheckResult]:
        return _periods_results(context, "genus2", genus2_periods(context), 2)
