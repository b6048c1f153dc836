"""Newforms of level 121 by point counting, and their periods along modular symbols."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import sympy

from xns11.core.errors import ConvergenceError
from xns11.curves.agm import EllipticLattice
from xns11.curves.ellmaps import CURVES, WeierstrassModel
from xns11.modular.siegel import Matrix
from xns11.utils.cache import AnCache

logger = logging.getLogger(__name__)

LEVEL = 121
BAD_PRIME = 11
LABELS = ("A", "B", "C", "D")


# ── Coefficient tables ────────────────────────────────────────────────


def ap_count(curve: WeierstrassModel, p: int) -> int:
    """a_p = p + 1 - #E(F_p); 0 at the additive prime 11."""
    if p == BAD_PRIME:
        return 0
    a1, a2, a3, a4, a6 = (int(a) % p for a in curve.ainvs)
    x = np.arange(p, dtype=np.int64)
    rhs = (((x + a2) * x % p + a4) * x % p + a6) % p
    if p == 2:
        affine = 0
        for xv in range(2):
            for y in range(2):
                affine += (y * y + a1 * xv * y + a3 * y - int(rhs[xv])) % 2 == 0
        return p - affine
    # y^2 + (a1 x + a3) y = rhs  <=>  (2y + a1 x + a3)^2 = disc
    disc = ((a1 * x + a3) ** 2 + 4 * rhs) % p
    squares = np.zeros(p, dtype=bool)
    squares[(x * x) % p] = True
    chi = np.where(disc == 0, 0, np.where(squares[disc], 1, -1))
    return -int(chi.sum())


@dataclass
class AnTable:
    """a_1..a_nmax of the newform attached to one of the curves A..D."""

    label: str
    coefficients: np.ndarray

    @property
    def nmax(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.nmax:
            raise IndexError(f"a_{n} outside 1..{self.nmax}")
        return int(self.coefficients[n])


def _smallest_prime_factors(nmax: int) -> np.ndarray:
    spf = np.zeros(nmax + 1, dtype=np.int64)
    for p in sympy.primerange(2, nmax + 1):
        block = spf[p :: p]
        block[block == 0] = p
    return spf


def an_extend(label: str, ap: Mapping[int, int], nmax: int) -> AnTable:
    """Multiplicative extension of a_p, with the Hecke recursion at good primes."""
    spf = _smallest_prime_factors(nmax)
    a = np.zeros(nmax + 1, dtype=np.int64)
    if nmax >= 1:
        a[1] = 1
    for n in range(2, nmax + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if m > 1:
            a[n] = a[n // m] * a[m]
        elif k == 1:
            if p not in ap:
                raise ValueError(f"{label}: a_p missing for p={p}")
            a[n] = ap[p]
        elif p == BAD_PRIME:
            a[n] = 0
        else:
            a[n] = a[p] * a[n // p] - p * a[n // (p * p)]
    return AnTable(label, a)


def _count_chunk(curve: WeierstrassModel, primes: Sequence[int]) -> dict[int, int]:
    return {p: ap_count(curve, p) for p in primes}


def an_table(
    label: str,
    nmax: int,
    cache: AnCache | None = None,
    max_workers: int = 1,
) -> AnTable:
    """Coefficient table from the cache, or by point counting over all p <= nmax."""
    if cache is not None:
        cached = cache.load(label, nmax)
        if cached is not None:
            return AnTable(label, cached)
    curve = CURVES[label]
    primes = list(sympy.primerange(2, nmax + 1))
    chunks = [primes[i::max_workers] for i in range(max_workers)]
    ap: dict[int, int] = {}
    logger.info("Counting points on E_%s for %d primes", label, len(primes))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            for part in executor.map(lambda c: _count_chunk(curve, c), chunks):
                ap.update(part)
    else:
        ap = _count_chunk(curve, primes)
    table = an_extend(label, ap, nmax)
    if cache is not None:
        cache.store(label, table.coefficients)
    return table


# ── Modular symbols ───────────────────────────────────────────────────


@dataclass(frozen=True)
class SymbolPath:
    """The modular symbol {0, a/c}."""

    a: int
    c: int

    def __post_init__(self) -> None:
        if self.c <= 0 or math.gcd(self.a, self.c) != 1:
            raise ValueError(f"{self.a}/{self.c} is not a reduced fraction with c > 0")

    def __str__(self) -> str:
        return f"{{0,{self.a}/{self.c}}}"


SYMBOL_PATHS: tuple[SymbolPath, ...] = (
    SymbolPath(3, 52),
    SymbolPath(4, 97),
    SymbolPath(19, 92),
    SymbolPath(59, 119),
    SymbolPath(8, 57),
    SymbolPath(11, 74),
    SymbolPath(3, 28),
    SymbolPath(11, 37),
)


def symbol_matrix(path: SymbolPath) -> Matrix:
    """[[A, a], [121k, c]] in Gamma0(121) sending 0 to a/c, with k >= 0 minimal."""
    a, c = path.a, path.c
    if math.gcd(c, LEVEL) != 1:
        raise ValueError(f"{path}: cusp a/c is not Gamma0({LEVEL})-equivalent to 0")
    if c == 1:
        return ((1, a), (0, 1))
    # A c - 121 k a = 1  <=>  121 a k = -1 mod c
    k = (-pow(LEVEL * a, -1, c)) % c
    big_a = (1 + LEVEL * k * a) // c
    return ((big_a, a), (LEVEL * k, c))


def matrix_inverse(m: Matrix) -> Matrix:
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


@dataclass(frozen=True)
class PeriodValue:
    value: complex
    n_used: int
    tail_bound: float


def tail_bound(n: int, height_den: int) -> float:
    """Bound on both omitted tails, from |a_k| <= d(k) sqrt(k) <= 2k."""
    r = math.exp(-2 * math.pi / height_den)
    return 4 * r ** (n + 1) / (1 - r)


def terms_needed(height_den: int, tol: float) -> int:
    r = math.exp(-2 * math.pi / height_den)
    n = math.log(tol * (1 - r) / 4) / math.log(r)
    return max(1, math.ceil(n))


def _endpoint_sum(table: AnTable, n_terms: int, num: int, den: int) -> complex:
    """Sum a_n / n * exp(2 pi i n (num + i) / den) for n <= n_terms."""
    n = np.arange(1, n_terms + 1, dtype=np.int64)
    phase = 2 * np.pi * ((n * num) % den) / den
    coeff = table.coefficients[1 : n_terms + 1] / n
    return complex(np.sum(coeff * np.exp(1j * phase - 2 * np.pi * n / den)))


def period_integral(
    table: AnTable, gamma: Matrix, tol: float, n_terms: int | None = None
) -> PeriodValue:
    """Integral of f dq/q from z to gamma(z), both endpoints at height 1/C."""
    (a, b), (c, d) = gamma
    if a * d - b * c != 1 or c % LEVEL:
        raise ValueError(f"{gamma} is not in Gamma0({LEVEL})")
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        return PeriodValue(0j, 0, 0.0)
    n = n_terms if n_terms is not None else terms_needed(c, tol)
    if n > table.nmax:
        raise ConvergenceError(
            f"tol={tol:g} needs {n} coefficients of f_{table.label}, table has {table.nmax}"
        )
    # z1 = (-d + i) / c, gamma(z1) = (a + i) / c
    value = _endpoint_sum(table, n, a, c) - _endpoint_sum(table, n, -d, c)
    return PeriodValue(value, n, tail_bound(n, c))


@dataclass
class OmegaNew:
    """Periods of f_A..f_D along the eight symbols, with convergence diagnostics."""

    matrix: np.ndarray
    entries: list[list[PeriodValue]]
    stability: np.ndarray
    membership: np.ndarray | None = None
    paths: tuple[SymbolPath, ...] = field(default=SYMBOL_PATHS)

    @property
    def max_stability(self) -> float:
        return float(np.max(self.stability))

    def real_stack(self) -> np.ndarray:
        return np.vstack([self.matrix.real, self.matrix.imag])


def omega_new(
    tables: Mapping[str, AnTable],
    tol: float,
    lattices: Mapping[str, EllipticLattice] | None = None,
) -> OmegaNew:
    """The 4x8 matrix of integrals; rows f_A..f_D, columns in symbol order."""
    matrix = np.zeros((len(LABELS), len(SYMBOL_PATHS)), dtype=complex)
    stability = np.zeros(matrix.shape)
    entries: list[list[PeriodValue]] = []
    gammas = [symbol_matrix(s) for s in SYMBOL_PATHS]
    for i, label in enumerate(LABELS):
        row = []
        for j, gamma in enumerate(gammas):
            pv = period_integral(tables[label], gamma, tol)
            doubled = period_integral(
                tables[label], gamma, tol, n_terms=min(2 * pv.n_used, tables[label].nmax)
            )
            matrix[i, j] = pv.value
            stability[i, j] = abs(doubled.value - pv.value)
            row.append(pv)
        entries.append(row)
    logger.info("Omega_new assembled; max doubling delta %.3g", float(np.max(stability)))
    membership = None
    if lattices is not None:
        membership = np.zeros(matrix.shape)
        for i, label in enumerate(LABELS):
            for j in range(matrix.shape[1]):
                membership[i, j] = float(lattices[label].distance(complex(matrix[i, j])))
    return OmegaNew(matrix, entries, stability, membership)
