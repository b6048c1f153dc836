"""Siegel functions of level 11 and the cusp combinatorics of the non-split Cartan group."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from xns11.arith.cyclo import DEGREE, P, CycElem, legendre
from xns11.arith.qexp import QSeries, qs_inv, qs_normalize

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 2
# tried in turn only when the default fails the unit relations
FALLBACK_ALPHAS = (6, 7, 8, 10)

Matrix = tuple[tuple[int, int], tuple[int, int]]


def bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


@dataclass(frozen=True, order=True)
class CuspLabel:
    """A cusp of X(11): a nonzero pair (m, n) mod 11 up to sign.

    The canonical representative has m in 1..5, or m = 0 and n in 1..5.
    """

    m: int
    n: int

    @classmethod
    def of(cls, m: int, n: int) -> CuspLabel:
        m, n = m % P, n % P
        if m == 0 and n == 0:
            raise ValueError("(0, 0) is not a cusp")
        if m > P // 2 or (m == 0 and n > P // 2):
            m, n = (-m) % P, (-n) % P
        return cls(m, n)

    def pairing(self, other: CuspLabel) -> int:
        return (self.m * other.m + self.n * other.n) % P

    def __str__(self) -> str:
        return f"({self.m},{self.n})"


INFINITY = CuspLabel(1, 0)


@lru_cache(maxsize=1)
def all_labels() -> tuple[CuspLabel, ...]:
    return tuple(sorted({CuspLabel.of(m, n) for m in range(P) for n in range(P) if m or n}))


class Side(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


OrbitKey = tuple[int, Side]


@dataclass(frozen=True)
class CartanData:
    """Norm-one part G of a non-split Cartan group and its normalizer H in SL2(F_11)."""

    alpha: int
    group: tuple[Matrix, ...]
    normalizer: tuple[Matrix, ...]

    @property
    def twist(self) -> int:
        """c in 1..5 with c^2 = -alpha, so that diag(1, c) conjugates G onto the rotations."""
        return next(c for c in range(1, P // 2 + 1) if (c * c + self.alpha) % P == 0)

    @property
    def involution(self) -> Matrix:
        """An element of H outside G, mapping the fiber of P_k to that of wP_k."""
        return next(m for m in self.normalizer if m not in self.group)


@lru_cache(maxsize=None)
def cartan_data(alpha: int = DEFAULT_ALPHA) -> CartanData:
    if legendre(alpha) != -1:
        raise ValueError(f"alpha={alpha} is not a non-square mod {P}")
    group: list[Matrix] = []
    other: list[Matrix] = []
    for a in range(P):
        for b in range(P):
            norm = (a * a - alpha * b * b) % P
            if norm == 1:
                group.append(((a, alpha * b % P), (b, a)))
            elif norm == P - 1:
                other.append(((a, -alpha * b % P), (b, -a % P)))
    return CartanData(alpha=alpha, group=tuple(group), normalizer=tuple(group + other))


def _row_action(label: CuspLabel, mat: Matrix) -> CuspLabel:
    (a, b), (c, d) = mat
    return CuspLabel.of(label.m * a + label.n * c, label.m * b + label.n * d)


def _column_action(label: CuspLabel, mat: Matrix) -> CuspLabel:
    (a, b), (c, d) = mat
    return CuspLabel.of(a * label.m + b * label.n, c * label.m + d * label.n)


def label_orbit(
    label: CuspLabel, matrices: Iterable[Matrix], column: bool = False
) -> frozenset[CuspLabel]:
    act = _column_action if column else _row_action
    return frozenset(act(label, mat) for mat in matrices)


def to_rotation_frame(
    labels: Iterable[CuspLabel], cd: CartanData, column: bool
) -> frozenset[CuspLabel]:
    """Carry labels through diag(1, c): cusps (columns) by n -> cn, Siegel indices (rows)
    by n -> n/c, so the pairing m m' + n n' is unchanged.

    In this frame every non-square alpha gives the fibers {m^2 + n^2 = +-k^2}, the
    labelling with zeta = exp(2 pi i / 11) in which the constant table is written.
    """
    c = cd.twist if column else pow(cd.twist, -1, P)
    return frozenset(CuspLabel.of(label.m, c * label.n) for label in labels)


@dataclass(frozen=True)
class CuspOrbit:
    """Siegel indices of the cusps of X(11) above P_k (plus) or wP_k (minus)."""

    k: int
    side: Side
    members: frozenset[CuspLabel]

    @property
    def key(self) -> OrbitKey:
        return (self.k, self.side)


@lru_cache(maxsize=None)
def cusp_orbits(cd: CartanData) -> tuple[CuspOrbit, ...]:
    """The ten G-orbits on labels, as (P_1, wP_1, ..., P_5, wP_5)."""
    out: list[CuspOrbit] = []
    for k in range(1, 6):
        seed = CuspLabel(k, 0)
        plus = label_orbit(seed, cd.group)
        minus = label_orbit(seed, cd.normalizer) - plus
        plus = to_rotation_frame(plus, cd, column=False)
        minus = to_rotation_frame(minus, cd, column=False)
        if len(plus) != 6 or len(minus) != 6:
            raise ValueError(f"alpha={cd.alpha}: orbit sizes {len(plus)}, {len(minus)} for k={k}")
        out.append(CuspOrbit(k, Side.PLUS, plus))
        out.append(CuspOrbit(k, Side.MINUS, minus))
    covered = set().union(*(o.members for o in out))
    if len(covered) != len(all_labels()):
        raise ValueError(f"alpha={cd.alpha}: orbits cover {len(covered)} labels")
    return tuple(out)


def orbit_for(cd: CartanData, k: int, side: Side) -> CuspOrbit:
    return cusp_orbits(cd)[2 * (k - 1) + (side is Side.MINUS)]


def cusp_class(cd: CartanData, k: int, side: Side) -> frozenset[CuspLabel]:
    """The cusps of X(11) lying over P_k or wP_k, under the column action."""
    seed = CuspLabel(k, 0)
    if side is Side.MINUS:
        seed = _column_action(seed, cd.involution)
    return to_rotation_frame(label_orbit(seed, cd.group, column=True), cd, column=True)


# ── Siegel products ───────────────────────────────────────────────────


def siegel_lead(m: int) -> Fraction:
    return Fraction(P, 2) * bernoulli2(Fraction(m % P, P))


def _factors(m: int, n: int, prec: int) -> list[tuple[int, int]]:
    """(q-exponent, zeta-exponent) of every binomial 1 - zeta^j q^d with d < prec."""
    m, n = m % P, n % P
    out = [(m, n)]
    k = 1
    while P * k - m < prec:
        if P * k + m < prec:
            out.append((P * k + m, n))
        out.append((P * k - m, (-n) % P))
        k += 1
    return out


def _binomial_product(factors: Iterable[tuple[int, int]], prec: int) -> np.ndarray:
    # Eleven unreduced zeta coordinates, so multiplying by zeta^j is a column roll.
    f = np.empty((prec, P), dtype=object)
    f.fill(0)
    f[0, 0] = 1
    for d, j in factors:
        if d >= prec:
            continue
        f[d:] -= np.roll(f[: prec - d], j, axis=1)
    return f[:, :DEGREE] - f[:, DEGREE:]


def siegel_constant(m: int, n: int) -> CycElem:
    """Leading coefficient of S_(m,n): 1 - zeta^n when m = 0, else 1."""
    if m % P == 0:
        return 1 - CycElem.zeta_power(n)
    return CycElem.one()


def siegel_series(m: int, n: int, prec: int) -> QSeries:
    """q_*-expansion of S_(m,n), with every omitted factor = 1 mod q_*^prec."""
    if m % P == 0 and n % P == 0:
        raise ValueError("(0, 0) has no Siegel function")
    return QSeries.from_array(siegel_lead(m), _binomial_product(_factors(m, n, prec), prec))


@lru_cache(maxsize=64)
def orbit_product(cd: CartanData, k: int, side: Side, prec: int) -> QSeries:
    """g_k (plus) or h_k (minus): the raw product over the orbit's canonical labels."""
    orbit = orbit_for(cd, k, side)
    lead = sum((siegel_lead(c.m) for c in orbit.members), Fraction(0))
    factors = [f for c in sorted(orbit.members) for f in _factors(c.m, c.n, prec)]
    logger.debug("orbit product k=%d side=%s alpha=%d prec=%d", k, side.value, cd.alpha, prec)
    return QSeries.from_array(lead, _binomial_product(factors, prec))


# ── Units ─────────────────────────────────────────────────────────────

UnitSpec = Mapping[OrbitKey, int]

_P, _M = Side.PLUS, Side.MINUS

UNIT_SPECS: dict[str, dict[OrbitKey, int]] = {
    "X": {(5, _P): 1, (5, _M): 1},
    "Y": {(5, _P): 1, (5, _M): 1, (3, _P): -1, (3, _M): -1},
    "U": {(5, _P): 2, (5, _M): 1, (2, _M): -1, (3, _P): -1, (3, _M): -2, (4, _P): -1},
    "V": {(5, _P): 1, (5, _M): 2, (2, _P): -1, (3, _P): -2, (3, _M): -1, (4, _M): -1},
    # conjugates sigma^i U, sigma^i V up to constants
    "U1": {(4, _P): 2, (4, _M): 1, (5, _M): -1, (2, _P): -1, (2, _M): -2, (1, _P): -1},
    "U2": {(1, _P): 2, (1, _M): 1, (4, _M): -1, (5, _P): -1, (5, _M): -2, (3, _P): -1},
    "U3": {(3, _P): 2, (3, _M): 1, (1, _M): -1, (4, _P): -1, (4, _M): -2, (2, _P): -1},
    "U4": {(2, _P): 2, (2, _M): 1, (3, _M): -1, (1, _P): -1, (1, _M): -2, (5, _P): -1},
    "V1": {(4, _P): 1, (4, _M): 2, (5, _P): -1, (2, _P): -2, (2, _M): -1, (1, _M): -1},
    "V2": {(1, _P): 1, (1, _M): 2, (4, _P): -1, (5, _P): -2, (5, _M): -1, (3, _M): -1},
    "V3": {(3, _P): 1, (3, _M): 2, (1, _P): -1, (4, _P): -2, (4, _M): -1, (2, _M): -1},
    "V4": {(2, _P): 1, (2, _M): 2, (3, _P): -1, (1, _P): -2, (1, _M): -1, (5, _M): -1},
}


def swap_sides(spec: UnitSpec) -> dict[OrbitKey, int]:
    """Exchange the roles of g_k and h_k."""
    flip = {Side.PLUS: Side.MINUS, Side.MINUS: Side.PLUS}
    return {(k, flip[side]): e for (k, side), e in spec.items()}


def unit_product(
    spec: UnitSpec,
    prec: int,
    cd: CartanData | None = None,
    normalize: bool = False,
) -> QSeries:
    """Product of orbit products raised to the given exponents."""
    cd = cd or cartan_data()
    num: QSeries | None = None
    den: QSeries | None = None
    for (k, side), e in sorted(spec.items()):
        if e == 0:
            continue
        term = orbit_product(cd, k, side, prec) ** abs(e)
        if e > 0:
            num = term if num is None else num * term
        else:
            den = term if den is None else den * term
    if num is None:
        num = QSeries.constant(1, prec)
    result = num if den is None else num * qs_inv(den)
    if normalize:
        result, _ = qs_normalize(result)
    return result


# ── Divisors ──────────────────────────────────────────────────────────


def label_exponents(spec: UnitSpec, cd: CartanData | None = None) -> dict[CuspLabel, int]:
    cd = cd or cartan_data()
    out: dict[CuspLabel, int] = {}
    for (k, side), e in spec.items():
        for label in orbit_for(cd, k, side).members:
            out[label] = out.get(label, 0) + e
    return out


def divisor_order(spec: Mapping[CuspLabel, int], at: CuspLabel) -> Fraction:
    """Order at a cusp, in q_*-valuation units, of a product of Siegel functions."""
    total = Fraction(0)
    for label, e in spec.items():
        total += e * siegel_lead(label.pairing(at))
    return total


def divisor(spec: UnitSpec, cd: CartanData | None = None) -> dict[OrbitKey, Fraction]:
    """Orders of a unit at P_1, wP_1, ..., P_5, wP_5, checked constant on every fiber."""
    cd = cd or cartan_data()
    exponents = label_exponents(spec, cd)
    out: dict[OrbitKey, Fraction] = {}
    for k in range(1, 6):
        for side in Side:
            orders = {divisor_order(exponents, c) for c in cusp_class(cd, k, side)}
            if len(orders) != 1:
                raise ValueError(f"order not constant over the fiber of {side.value} P_{k}")
            out[(k, side)] = orders.pop()
    return out
