"""Isomorphism of J_ns(11) with J_0(121)^new and the lattice quotients behind it."""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from xns11.checks.artifacts import (
    elliptic_lattices,
    genus2_periods,
    new_periods,
    ns_periods,
    write_audit,
)
from xns11.core.check import Check, CheckContext
from xns11.core.models import CheckResult
from xns11.lattices.isomorphism import (
    RealLattice,
    fit_row_scales,
    gl8_check,
    quotient,
    reconstruct,
    scaled_product,
)
from xns11.lattices.normal_forms import elementary_divisors, group_string
from xns11.modular.msym import LABELS

logger = logging.getLogger(__name__)

ABCD_FACTORS = (1, 1, 1, 1, 2, 2, 6, 6)
GENUS2_FACTORS = (1, 1, 3, 3)
KERNEL_DIVISORS = [2, 2, 2, 2, 3, 3]


def _ambient(context: CheckContext, omega, labels: tuple[str, ...], tag: str) -> RealLattice:
    lattices = elliptic_lattices(context)
    row_lattices = [lattices[label] for label in labels]
    scales = fit_row_scales(
        omega, row_lattices, context.config.numeric.scales,
        context.config.numeric.membership_tol_ns,
    )
    logger.info("%s: row scales %s", tag, scales)
    return scaled_product(row_lattices, scales, tag)


def _quotient_result(
    check_id: str, anchor: str, sub: RealLattice, sup: RealLattice, expected: tuple[int, ...],
    tol: float,
) -> CheckResult:
    snf = quotient(sub, sup, tol)
    return CheckResult.from_bool(
        check_id,
        anchor,
        snf.factors == expected,
        first_failing=None if snf.factors == expected else f"factors {list(snf.factors)}",
        factors=list(snf.factors),
        group=snf.group_string(),
        order=snf.order,
    )


class IsomorphismCheck(Check):
    """s * Omega_ns * M = Omega_new with M in GL8(Z)."""

    @property
    def name(self) -> str:
        return "isom.gl8"

    @property
    def scope(self) -> str:
        return "isom"

    def run(self, context: CheckContext) -> list[CheckResult]:
        n = context.config.numeric
        ns, new = ns_periods(context), new_periods(context)
        witness = gl8_check(
            ns.omega, new.matrix, n.lattice_tol, n.scales, context.config.max_workers
        )
        if context.audit:
            write_audit(context, "isom", {**witness.to_dict(), "attempts": witness.attempts})
        return [
            CheckResult.from_bool(
                "isom.gl8",
                "Omega_ns and Omega_new span the same lattice up to row signs",
                witness.success,
                first_failing=None if witness.success else f"residual {witness.residual:.3g}",
                **witness.to_dict(),
                attempts=witness.attempts,
            )
        ]


class QuotientCheck(Check):
    """The three quotient groups and the kernel they determine."""

    @property
    def name(self) -> str:
        return "isom.quotients"

    @property
    def scope(self) -> str:
        return "isom"

    def run(self, context: CheckContext) -> list[CheckResult]:
        n = context.config.numeric
        new, ns, g2 = new_periods(context), ns_periods(context), genus2_periods(context)

        lam_new = RealLattice.from_complex(new.matrix, "Lambda_new")
        lam_ns = RealLattice.from_complex(ns.omega, "Lambda_ns")
        lam_x = RealLattice.from_complex(g2.omega, "Lambda_X")
        abcd_new = _ambient(context, new.matrix, LABELS, "Lambda_ABCD")
        abcd_ns = _ambient(context, ns.omega, ns.labels, "Lambda_ABCD")
        ad = _ambient(context, g2.omega, g2.labels, "Lambda_AD")

        exact = reconstruct(lam_new, abcd_new, n.lattice_tol, n.max_den)
        off = [str(idx) for idx, q in np.ndenumerate(exact) if Fraction(q).denominator != 1]
        results = [
            CheckResult.from_bool(
                "isom.inclusion",
                "Lambda_new is a sublattice of Lambda_A x ... x Lambda_D",
                not off,
                first_failing=off[0] if off else None,
                max_den=n.max_den,
            ),
            _quotient_result(
                "isom.quotient_new", "(Lambda_A x ... x Lambda_D) / Lambda_new",
                lam_new, abcd_new, ABCD_FACTORS, n.lattice_tol,
            ),
            _quotient_result(
                "isom.quotient_ns", "(Lambda_A x ... x Lambda_D) / Lambda_ns",
                lam_ns, abcd_ns, ABCD_FACTORS, n.lattice_tol,
            ),
            _quotient_result(
                "isom.quotient_genus2", "(Lambda_A x Lambda_D) / Lambda_X",
                lam_x, ad, GENUS2_FACTORS, n.lattice_tol,
            ),
        ]

        divisors = elementary_divisors(results[1].data["factors"])
        results.append(
            CheckResult.from_bool(
                "isom.kernel",
                "kernel of the product of the four quotient maps",
                divisors == KERNEL_DIVISORS,
                first_failing=None if divisors == KERNEL_DIVISORS else f"divisors {divisors}",
                elementary_divisors=divisors,
                group=group_string(divisors),
            )
        )
        return results

