"""Exact arithmetic: the cyclotomic tower of level 11 and truncated q-series."""

from xns11.arith.cyclo import (
    COMPLEX_CONJUGATION,
    SIGMA,
    CycElem,
    GaloisAuto,
    cyc_inv,
    cyc_mul,
    eps_coords,
    galois_apply,
    sqrt_in_real_subfield,
    sqrt_m11,
)
from xns11.arith.qexp import QSeries, qs_add, qs_derive, qs_inv, qs_mul, qs_normalize

__all__ = [
    "COMPLEX_CONJUGATION",
    "SIGMA",
    "CycElem",
    "GaloisAuto",
    "QSeries",
    "cyc_inv",
    "cyc_mul",
    "eps_coords",
    "galois_apply",
    "qs_add",
    "qs_derive",
    "qs_inv",
    "qs_mul",
    "qs_normalize",
    "sqrt_in_real_subfield",
    "sqrt_m11",
]
