"""Numerically known period lattices and exact comparison of their Z-structures."""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from xns11.core.errors import ConvergenceError, ReconstructionError
from xns11.curves.agm import EllipticLattice
from xns11.lattices.normal_forms import SNFResult, determinant, snf

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


@dataclass
class RealLattice:
    """Columns of a 2g x 2g real matrix: [Re; Im] of g x 2g complex periods."""

    basis: np.ndarray
    tag: str = ""

    def __post_init__(self) -> None:
        rows, cols = self.basis.shape
        if rows != cols:
            raise ValueError(f"{self.tag}: basis must be square, got {self.basis.shape}")
        cond = self.condition
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise ConvergenceError(f"{self.tag}: basis is numerically singular (cond={cond:.3g})")

    @classmethod
    def from_complex(cls, omega: np.ndarray, tag: str = "") -> RealLattice:
        omega = np.asarray(omega, dtype=complex)
        return cls(np.vstack([omega.real, omega.imag]), tag)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.basis))

    def to_complex(self) -> np.ndarray:
        g = self.rank // 2
        return self.basis[:g] + 1j * self.basis[g:]


def product_lattice(lattices: Sequence[EllipticLattice], tag: str = "") -> RealLattice:
    """Lattice of the product of elliptic curves; column pairs (omega1, omega2) per factor."""
    g = len(lattices)
    omega = np.zeros((g, 2 * g), dtype=complex)
    for i, lat in enumerate(lattices):
        omega[i, 2 * i] = complex(lat.omega1)
        omega[i, 2 * i + 1] = complex(lat.omega2)
    return RealLattice.from_complex(omega, tag)


def reconstruct(
    sub: RealLattice, sup: RealLattice, tol: float = 1e-4, max_den: int = 1000
) -> np.ndarray:
    """Exact rational C with sup.basis @ C = sub.basis, as an object array of Fractions."""
    if sub.rank != sup.rank:
        raise ReconstructionError(f"rank mismatch: {sub.rank} vs {sup.rank}")
    approx = np.linalg.solve(sup.basis, sub.basis)
    exact = np.empty(approx.shape, dtype=object)
    worst = 0.0
    for idx, x in np.ndenumerate(approx):
        q = Fraction(float(x)).limit_denominator(max_den)
        worst = max(worst, abs(float(x) - float(q)))
        exact[idx] = q
    if worst > tol:
        raise ReconstructionError(
            f"{sub.tag} in {sup.tag}: entry off by {worst:.3g} from any fraction "
            f"with denominator <= {max_den}"
        )
    rebuilt = sup.basis @ exact.astype(float)
    scale = max(1.0, float(np.max(np.abs(sub.basis))))
    residual = float(np.max(np.abs(rebuilt - sub.basis))) / scale
    if residual > tol:
        raise ReconstructionError(f"{sub.tag} in {sup.tag}: residual {residual:.3g} > {tol:g}")
    logger.debug("reconstructed %s in %s: worst rounding %.3g", sub.tag, sup.tag, worst)
    return exact


def integer_matrix(c: np.ndarray) -> np.ndarray:
    out = np.empty(c.shape, dtype=object)
    for idx, q in np.ndenumerate(c):
        if Fraction(q).denominator != 1:
            raise ReconstructionError(f"entry {idx} = {q} is not an integer")
        out[idx] = int(q)
    return out


def quotient(sub: RealLattice, sup: RealLattice, tol: float = 1e-4) -> SNFResult:
    """Structure of sup / sub via the Smith form of the integral inclusion matrix."""
    c = integer_matrix(reconstruct(sub, sup, tol, max_den=1))
    result = snf(c)
    logger.info("%s / %s = %s", sup.tag, sub.tag, result.group_string())
    return result


@dataclass
class IsomorphismWitness:
    """Outcome of the search for M in GL(2g, Z) and signs s with s * Omega_1 * M = Omega_2."""

    success: bool
    matrix: np.ndarray | None
    signs: tuple[int, ...]
    scale: int
    det: int
    residual: float
    attempts: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "matrix": None if self.matrix is None else [[int(x) for x in r] for r in self.matrix],
            "signs": list(self.signs),
            "scale": self.scale,
            "det": self.det,
            "residual": self.residual,
        }


def _try_branch(
    left: np.ndarray, right: np.ndarray, signs: tuple[int, ...], scale: int, tol: float
) -> IsomorphismWitness:
    scaled = (np.array(signs, dtype=float)[:, None] / scale) * left
    stack = np.vstack([scaled.real, scaled.imag])
    target = np.vstack([right.real, right.imag])
    m = np.linalg.solve(stack, target)
    rounded = np.rint(m)
    residual = float(np.max(np.abs(m - rounded)))
    ints = rounded.astype(int).astype(object)
    det = determinant(ints) if residual < tol else 0
    ok = residual < tol and abs(det) == 1
    return IsomorphismWitness(ok, ints if ok else None, signs, scale, det, residual)


def gl_check(
    omega_1: np.ndarray,
    omega_2: np.ndarray,
    tol: float = 1e-4,
    scales: Sequence[int] = (1,),
    max_workers: int = 1,
) -> IsomorphismWitness:
    """Search row signs and a common row scale so that omega_1 and omega_2 span one lattice."""
    omega_1 = np.asarray(omega_1, dtype=complex)
    omega_2 = np.asarray(omega_2, dtype=complex)
    if omega_1.shape != omega_2.shape:
        raise ValueError(f"shape mismatch {omega_1.shape} vs {omega_2.shape}")
    g = omega_1.shape[0]
    branches = [
        (signs, scale)
        for scale in scales
        for signs in itertools.product((1, -1), repeat=g)
    ]

    def run(branch: tuple[tuple[int, ...], int]) -> IsomorphismWitness:
        return _try_branch(omega_1, omega_2, branch[0], branch[1], tol)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(run, branches))
    else:
        results = [run(b) for b in branches]
    attempts = [
        {"signs": list(r.signs), "scale": r.scale, "residual": r.residual, "det": r.det}
        for r in results
    ]
    winner = next((r for r in results if r.success), None)
    if winner is None:
        winner = min(results, key=lambda r: r.residual)
        logger.warning("No sign/scale choice gives an integral unimodular matrix")
    winner.attempts = attempts
    return winner


def gl8_check(
    omega_ns: np.ndarray,
    omega_new: np.ndarray,
    tol: float = 1e-4,
    scales: Sequence[int] = (1,),
    max_workers: int = 1,
) -> IsomorphismWitness:
    """s * Omega_ns * M = Omega_new with M in GL8(Z), s in {+-1}^4, up to a row scale."""
    if np.shape(omega_ns) != (4, 8):
        raise ValueError(f"expected a 4x8 period matrix, got {np.shape(omega_ns)}")
    return gl_check(omega_ns, omega_new, tol, scales, max_workers)


def fit_row_scales(
    omega: np.ndarray,
    lattices: Sequence[EllipticLattice],
    scales: Sequence[int] = (1, 4),
    rel_tol: float = 1e-5,
) -> tuple[int, ...]:
    """Largest candidate s per row with every entry of the row in s times that lattice."""
    omega = np.asarray(omega, dtype=complex)
    if len(omega) != len(lattices):
        raise ValueError(f"{len(omega)} rows for {len(lattices)} lattices")
    out = []
    for i, (row, lat) in enumerate(zip(omega, lattices)):
        fits = [
            s for s in scales
            if all(lat.scaled(s).contains(mpmath.mpc(complex(v)), rel_tol) for v in row)
        ]
        if not fits:
            raise ReconstructionError(f"row {i} lies in no multiple {list(scales)} of its lattice")
        out.append(max(fits))
    return tuple(out)


def scaled_product(
    lattices: Sequence[EllipticLattice], scales: Sequence[int], tag: str = ""
) -> RealLattice:
    return product_lattice([lat.scaled(s) for lat, s in zip(lattices, scales)], tag)
