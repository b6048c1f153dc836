"""Plane models, branch points, monodromy and period matrices of the two curves."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Sequence

import mpmath
import numpy as np
import sympy

from xns11.arith.qexp import QSeries
from xns11.core.errors import ConvergenceError, IdentityError
from xns11.curves.ellmaps import CUBIC_A, CUBIC_D
from xns11.curves.homology import HomologyBasis, homology_basis, permutation_cycles
from xns11.curves.quadrature import (
    DEFAULT_DENSITY,
    Arc,
    Segment,
    distance_to_segment,
    gauss_legendre,
    panel_breaks,
)

logger = logging.getLogger(__name__)

t, z = sympy.symbols("t z")

DEFAULT_BITS = 256
DEFAULT_STANDOFF = Fraction(1, 8)
NEWTON_STEPS = 8
MOTION_FRACTION = 0.4
MAX_HALVINGS = 40
BASE_ANGLE_STEP = 0.0731


# ── Plane curves ──────────────────────────────────────────────────────


@dataclass
class Differential:
    """R(t, z) dt for a rational R."""

    name: str
    expr: sympy.Expr

    @cached_property
    def _fn(self) -> Callable[[Any, Any], Any]:
        return sympy.lambdify((t, z), self.expr, "numpy")

    def __call__(self, tv: Any, zv: Any) -> Any:
        return self._fn(tv, zv)


@dataclass
class PlaneCurve:
    """F(t, z) = 0 viewed as a cover of the t-line; the sheets are the z-roots."""

    name: str
    expr: sympy.Expr
    expected_genus: int | None = None

    def __post_init__(self) -> None:
        self.expr = sympy.expand(self.expr)
        pz = sympy.Poly(self.expr, z)
        self.degree = pz.degree()
        if self.degree < 1:
            raise ValueError(f"{self.name}: F has no z-dependence")
        self._coeffs = []
        for j in range(self.degree, -1, -1):
            c = sympy.Poly(pz.coeff_monomial(z**j), t).all_coeffs()
            self._coeffs.append(np.array([complex(a) for a in c]))

    @classmethod
    def from_sympy(
        cls,
        name: str,
        f: sympy.Expr,
        t_sym: sympy.Symbol,
        z_sym: sympy.Symbol,
        expected_genus: int | None = None,
    ) -> PlaneCurve:
        return cls(name, f.subs({t_sym: t, z_sym: z}, simultaneous=True), expected_genus)

    def __repr__(self) -> str:
        return f"PlaneCurve({self.name}, deg_z={self.degree})"

    def coefficients_at(self, tv: complex) -> np.ndarray:
        """Coefficients of F(tv, z) in z, highest degree first."""
        return np.array([np.polyval(c, tv) for c in self._coeffs])

    def evaluate(self, tv: complex, zv: Any) -> Any:
        return np.polyval(self.coefficients_at(tv), zv)

    def z_derivative(self, tv: complex, zv: Any) -> Any:
        return np.polyval(np.polyder(self.coefficients_at(tv)), zv)

    def fiber(self, tv: complex) -> np.ndarray:
        """All z with F(tv, z) = 0, polished by Newton and sorted."""
        roots = np.roots(self.coefficients_at(tv))
        if len(roots) != self.degree:
            raise ConvergenceError(f"{self.name}: fewer than {self.degree} sheets at t = {tv}")
        polished = self.newton(tv, roots)
        if polished is None:
            raise ConvergenceError(f"{self.name}: Newton failed on the fiber at t = {tv}")
        return np.array(sorted(polished, key=lambda w: (round(w.real, 9), w.imag)))

    def newton(self, tv: complex, zs: np.ndarray) -> np.ndarray | None:
        coeffs = self.coefficients_at(tv)
        dcoeffs = np.polyder(coeffs)
        zs = np.array(zs, dtype=complex)
        size = np.full(len(zs), np.inf)
        for _ in range(NEWTON_STEPS):
            delta = np.polyval(coeffs, zs) / np.polyval(dcoeffs, zs)
            if not np.all(np.isfinite(delta)):
                return None
            zs = zs - delta
            size = np.abs(delta) / (1 + np.abs(zs))
            if np.all(size <= 1e-13):
                return zs
        # rounding floor of an ill-conditioned root
        return zs if np.all(size <= 1e-9) else None

    def is_even_in_z(self) -> bool:
        return sympy.expand(self.expr.subs(z, -z) - self.expr) == 0

    def discriminant(self) -> sympy.Poly:
        """A polynomial in t whose roots contain every branch point and every pole of z."""
        if self.is_even_in_z():
            w = sympy.Symbol("w")
            h = sympy.Poly(self.expr.subs(z, sympy.sqrt(w)), w)
            disc = sympy.discriminant(h.as_expr(), w) if h.degree() > 1 else sympy.Integer(1)
            full = disc * h.coeff_monomial(1) * h.LC()
        else:
            pz = sympy.Poly(self.expr, z)
            full = sympy.discriminant(self.expr, z) * pz.LC()
        return sympy.Poly(sympy.expand(full), t)

    def contains(self, tv: complex, zv: complex, rel_tol: float = 1e-8) -> bool:
        scale = sum(abs(np.polyval(c, tv)) * abs(zv) ** (self.degree - j)
                    for j, c in enumerate(self._coeffs))
        return abs(self.evaluate(tv, zv)) <= rel_tol * max(1.0, scale)


def _poly_expr(coeffs: Sequence[int], x: sympy.Symbol) -> sympy.Expr:
    return sum(c * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))


def _series_value(poly: sympy.Poly, tv: QSeries, zv: QSeries) -> QSeries:
    total: QSeries | None = None
    for (i, j), c in poly.terms():
        term = ((tv**i) * (zv**j)).scale(Fraction(int(c.p), int(c.q)))
        total = term if total is None else total + term
    return total


def _vanishes_at(poly: sympy.Poly, marked: tuple[Any, Any]) -> bool:
    tv, zv = marked
    if isinstance(tv, QSeries):
        return _series_value(poly, tv, zv).is_zero()
    terms = [(complex(c), tv**i * zv**j) for (i, j), c in poly.terms()]
    value = sum(c * m for c, m in terms)
    scale = sum(abs(c * m) for c, m in terms)
    return abs(value) <= 1e-9 * max(1.0, scale)


def _generic_xns_point() -> tuple[complex, complex]:
    """(T, Z) with Z = (2Y + 1) T at a generic point of the cover of E_B."""
    x0 = 0.37 + 0.21j
    tv = np.sqrt(-np.polyval(CUBIC_D, x0))
    uv = np.sqrt(np.polyval(CUBIC_A, x0))
    return complex(tv), complex(uv * tv)


def x_of_tz() -> sympy.Expr:
    """X as a rational function of T and Z = (2Y + 1) T."""
    num = 12 * t**4 + 187 * t**2 + z**2
    den = 4 * (t**4 - 11 * t**2 + z**2)
    return num / den


def select_component(expr: sympy.Expr, marked: tuple[Any, Any]) -> sympy.Expr:
    """The irreducible factor of expr vanishing at the marked point."""
    _, factors = sympy.factor_list(expr, t, z)
    hits = [f for f, _ in factors if _vanishes_at(sympy.Poly(f, t, z), marked)]
    if len(hits) != 1:
        raise IdentityError(
            "plane_model", f"{len(hits)} components vanish at the marked point"
        )
    return hits[0]


def plane_model_xns(marked: tuple[Any, Any] | None = None) -> PlaneCurve:
    """Plane model in (T, Z) from T^2 + 4X^3 + 7X^2 - 6X + 19 = 0 with X = X(T, Z).

    ``marked`` is a point on the intended component: a pair of q-series or of complex
    numbers. By default a numeric point of the cover is used.
    """
    x = x_of_tz()
    relation = sympy.together(t**2 + _poly_expr(CUBIC_D, x))
    numerator, _ = sympy.fraction(relation)
    f = select_component(sympy.expand(numerator), marked or _generic_xns_point())
    curve = PlaneCurve("X_ns(11)", f, expected_genus=4)
    logger.info("plane model of X_ns(11): deg_z = %d", curve.degree)
    return curve


def xns_differentials() -> list[Differential]:
    """The pull-backs of the invariant differentials of E_A, ..., E_D, written in (T, Z)."""
    m = t**4 - 11 * t**2 + z**2
    q = 32 * t**4 + 605 * t**2 - z**2
    omega_c = 32 * m**2 / ((18 * t**4 + 121 * t**2 + 7 * z**2) * q)
    return [
        Differential("A", -11 * t / z * omega_c),
        Differential("B", -(t**2) / z * omega_c),
        Differential("C", omega_c),
        Differential("D", -t * q / (4 * z * m) * omega_c),
    ]


def genus2_curve() -> PlaneCurve:
    """y^2 = (4x^3 - 4x^2 - 28x + 41)(-4x^3 - 7x^2 + 6x - 19), with y = (2Y + 1) T."""
    f = z**2 + _poly_expr(CUBIC_A, t) * _poly_expr(CUBIC_D, t)
    return PlaneCurve("genus2", f, expected_genus=2)


def genus2_differentials() -> list[Differential]:
    return [Differential("A", 44 / z), Differential("D", 4 * (3 * t - 1) / z)]


def branch_points(curve: PlaneCurve, bits: int = DEFAULT_BITS) -> list[mpmath.mpc]:
    """Roots of the discriminant times the leading coefficient, factor by factor."""
    disc = curve.discriminant()
    roots: list[mpmath.mpc] = []
    _, factors = sympy.factor_list(disc.as_expr(), t)
    with mpmath.workprec(bits):
        for factor, _ in factors:
            p = sympy.Poly(factor, t)
            if p.degree() < 1:
                continue
            coeffs = [mpmath.mpf(int(c)) for c in p.all_coeffs()]
            try:
                found = mpmath.polyroots(coeffs, maxsteps=500, extraprec=2 * bits)
            except mpmath.libmp.NoConvergence as exc:
                raise ConvergenceError(f"{curve.name}: root finding failed: {exc}") from exc
            roots.extend(mpmath.mpc(r) for r in found)
    logger.info("%s: %d discriminant points", curve.name, len(roots))
    return roots


# ── Continuation ──────────────────────────────────────────────────────


def _min_gap(zs: np.ndarray) -> float:
    if len(zs) < 2:
        return math.inf
    diff = np.abs(zs[:, None] - zs[None, :])
    diff[np.diag_indices(len(zs))] = math.inf
    return float(np.min(diff))


def _match(a: np.ndarray, b: np.ndarray) -> tuple[int, ...]:
    """perm with a[i] ~ b[perm[i]]; raises when the matching is not a bijection."""
    perm = tuple(int(np.argmin(np.abs(b - w))) for w in a)
    if sorted(perm) != list(range(len(b))):
        raise ConvergenceError("sheets could not be matched after continuation")
    return perm


class SheetTracker:
    """Continues all sheets along path pieces and integrates differentials on the way."""

    def __init__(
        self,
        curve: PlaneCurve,
        singularities: np.ndarray,
        differentials: Sequence[Differential] = (),
        density: float = DEFAULT_DENSITY,
    ):
        self.curve = curve
        self.singularities = singularities
        self.differentials = list(differentials)
        self.density = density
        self.steps = 0

    def _step(self, t_to: complex, zs: np.ndarray) -> np.ndarray | None:
        moved = self.curve.newton(t_to, zs)
        if moved is None:
            return None
        if np.max(np.abs(moved - zs)) > MOTION_FRACTION * _min_gap(zs):
            return None
        self.steps += 1
        return moved

    def _panel(self, piece: Segment | Arc, a: float, b: float, zs: np.ndarray, depth: int = 0):
        x, w = gauss_legendre()
        s = a + (b - a) * x
        ts = piece.point(s)
        stations = list(ts) + [complex(piece.point(b))]
        values = np.empty((len(s), len(zs)), dtype=complex)
        current = zs
        for k, tk in enumerate(stations):
            nxt = self._step(tk, current)
            if nxt is None:
                if depth >= MAX_HALVINGS:
                    raise ConvergenceError(
                        f"{self.curve.name}: continuation stalled near t = {tk}"
                    )
                mid = (a + b) / 2
                z_mid, first = self._panel(piece, a, mid, zs, depth + 1)
                z_end, second = self._panel(piece, mid, b, z_mid, depth + 1)
                return z_end, first + second
            current = nxt
            if k < len(s):
                values[k] = current
        integrals = np.zeros((len(self.differentials), len(zs)), dtype=complex)
        if self.differentials:
            weights = ((b - a) * w * piece.velocity(s))[:, None]
            tcol = ts[:, None]
            for i, diff in enumerate(self.differentials):
                integrals[i] = np.sum(diff(tcol, values) * weights, axis=0)
        return current, integrals

    def run(self, piece: Segment | Arc, zs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Sheets at the end of the piece and the integrals (differential x sheet)."""
        breaks = panel_breaks(piece, self.singularities, self.density)
        total = np.zeros((len(self.differentials), len(zs)), dtype=complex)
        for a, b in zip(breaks, breaks[1:]):
            zs, part = self._panel(piece, a, b, zs)
            total += part
        return zs, total


# ── Monodromy ─────────────────────────────────────────────────────────


def _ramification(perm: Sequence[int]) -> int:
    return sum(len(c) - 1 for c in permutation_cycles(perm))


@dataclass
class Loop:
    """Ray from the base point to the branch point, a counterclockwise circle, and back."""

    point: complex
    radius: float
    angle: float
    permutation: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.permutation == tuple(range(len(self.permutation)))

    @property
    def near_point(self) -> complex:
        return self.point + self.radius * self._direction

    @property
    def _direction(self) -> complex:
        return complex(np.exp(1j * self.angle))

    def outward(self, base: complex) -> Segment:
        return Segment(base, self.near_point)

    def circle(self) -> Arc:
        return Arc(self.point, self.radius, self.angle)


@dataclass
class Monodromy:
    """Star of loops at a base point, ordered by the direction in which they leave it."""

    curve: PlaneCurve
    base: complex
    sheets: np.ndarray
    loops: list[Loop]
    singularities: np.ndarray
    infinity: tuple[int, ...] = ()
    tracked_infinity: tuple[int, ...] = ()

    @property
    def nontrivial(self) -> list[Loop]:
        return [lp for lp in self.loops if not lp.trivial]

    @property
    def genus(self) -> int:
        d = self.curve.degree
        total = sum(_ramification(lp.permutation) for lp in self.loops)
        total += _ramification(self.infinity)
        return (total - 2 * d + 2) // 2

    def to_dict(self) -> dict:
        return {
            "curve": self.curve.name,
            "base_point": [self.base.real, self.base.imag],
            "sheets": [[w.real, w.imag] for w in self.sheets],
            "loops": [
                {
                    "branch_point": [lp.point.real, lp.point.imag],
                    "radius": lp.radius,
                    "permutation": list(lp.permutation),
                    "trivial": lp.trivial,
                }
                for lp in self.loops
            ],
            "infinity": list(self.infinity),
        }


def _base_point(points: np.ndarray, radii: np.ndarray) -> tuple[complex, np.ndarray]:
    """A base point outside all branch points from which every ray stays clear of the
    other standoff discs; the real axis is tried first."""
    big = 1.5 * float(np.max(np.abs(points))) + 1.0 if len(points) else 1.0
    for k in range(81):
        theta = BASE_ANGLE_STEP * ((k + 1) // 2) * (1 if k % 2 else -1)
        base = big * complex(np.exp(1j * theta))
        rel = np.angle((points - base) / -base)
        if len(points) > 1 and np.min(np.diff(np.sort(rel))) < 1e-9:
            continue
        clear = True
        for i, p in enumerate(points):
            near = p + radii[i] * (base - p) / abs(base - p)
            others = [j for j in range(len(points)) if j != i]
            if any(distance_to_segment(points[j], base, near) < 2 * radii[j] for j in others):
                clear = False
                break
        if clear:
            return base, rel
    raise ConvergenceError("no admissible base point for the loop system")


def _compose(perms: Sequence[tuple[int, ...]], degree: int) -> tuple[int, ...]:
    """Permutation of the path that runs the loops in the given order."""
    out = []
    for i in range(degree):
        cur = i
        for perm in perms:
            cur = perm[cur]
        out.append(cur)
    return tuple(out)


def monodromy(
    curve: PlaneCurve,
    points: Sequence[mpmath.mpc] | None = None,
    standoff: Fraction | float = DEFAULT_STANDOFF,
    bits: int = DEFAULT_BITS,
    max_workers: int = 1,
) -> Monodromy:
    """Permutation of the sheets along every loop of a star based outside all branch points."""
    if points is None:
        points = branch_points(curve, bits)
    pts = np.array([complex(p) for p in points], dtype=complex)
    if len(pts) > 1:
        gaps = np.abs(pts[:, None] - pts[None, :])
        gaps[np.diag_indices(len(pts))] = math.inf
        radii = float(standoff) * gaps.min(axis=1)
    else:
        radii = np.full(len(pts), float(standoff))
    base, rel = _base_point(pts, radii)
    sheets = curve.fiber(base)
    loops = []
    for i in np.argsort(rel):
        direction = (base - pts[i]) / abs(base - pts[i])
        loops.append(Loop(pts[i], float(radii[i]), float(np.angle(direction))))
    tracker = SheetTracker(curve, pts)

    def run(loop: Loop) -> tuple[int, ...]:
        at_near, _ = tracker.run(loop.outward(base), sheets)
        around, _ = tracker.run(loop.circle(), at_near)
        return _match(around, at_near)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            perms = list(executor.map(run, loops))
    else:
        perms = [run(lp) for lp in loops]
    for loop, perm in zip(loops, perms):
        loop.permutation = perm

    product = _compose([lp.permutation for lp in loops], curve.degree)
    end, _ = tracker.run(Arc(0j, abs(base), float(np.angle(base))), sheets)
    tracked = _match(end, sheets)
    if tracked != product:
        raise ConvergenceError(
            f"{curve.name}: loop product {product} differs from the large circle {tracked}"
        )
    inverse = [0] * curve.degree
    for i, j in enumerate(product):
        inverse[j] = i
    mono = Monodromy(
        curve, base, sheets, loops, pts, tuple(inverse), tracked
    )
    orbit = {0}
    for _ in range(curve.degree):
        orbit |= {lp.permutation[i] for lp in loops for i in orbit}
    if len(orbit) != curve.degree:
        raise IdentityError("monodromy", f"{curve.name}: monodromy is not transitive")
    if curve.expected_genus is not None and mono.genus != curve.expected_genus:
        raise ConvergenceError(
            f"{curve.name}: Riemann-Hurwitz gives genus {mono.genus}, "
            f"expected {curve.expected_genus}"
        )
    logger.info(
        "%s: %d loops (%d nontrivial), genus %d, base point %.4g%+.4gi",
        curve.name, len(loops), len(mono.nontrivial), mono.genus, base.real, base.imag,
    )
    return mono


# ── Periods ───────────────────────────────────────────────────────────


def edge_integrals(
    mono: Monodromy,
    differentials: Sequence[Differential],
    density: float = DEFAULT_DENSITY,
    max_workers: int = 1,
) -> np.ndarray:
    """Integrals over every lifted nontrivial loop: shape (loop, sheet, differential)."""
    tracker = SheetTracker(mono.curve, mono.singularities, differentials, density)

    def run(loop: Loop) -> np.ndarray:
        at_near, out = tracker.run(loop.outward(mono.base), mono.sheets)
        _, around = tracker.run(loop.circle(), at_near)
        back = out[:, list(loop.permutation)]
        return (out + around - back).T

    loops = mono.nontrivial
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            parts = list(executor.map(run, loops))
    else:
        parts = [run(lp) for lp in loops]
    return np.array(parts)


@dataclass
class PeriodMatrix:
    """Periods of a basis of differentials over a Z-basis of first homology."""

    labels: tuple[str, ...]
    omega: np.ndarray
    homology: HomologyBasis
    monodromy: Monodromy
    stability: float
    null_residual: float

    @property
    def genus(self) -> int:
        return self.homology.genus

    def audit(self) -> dict:
        out = self.monodromy.to_dict()
        out["cycles"] = self.homology.words()
        out["intersection"] = self.homology.intersection.astype(int).tolist()
        out["stability"] = self.stability
        out["null_residual"] = self.null_residual
        return out


def period_matrix(
    curve: PlaneCurve,
    differentials: Sequence[Differential],
    tol: float = 1e-10,
    bits: int = DEFAULT_BITS,
    standoff: Fraction | float = DEFAULT_STANDOFF,
    max_workers: int = 1,
) -> PeriodMatrix:
    """Periods with a doubling check on the quadrature panels and continuation steps."""
    mono = monodromy(curve, standoff=standoff, bits=bits, max_workers=max_workers)
    basis = homology_basis(curve.degree, [lp.permutation for lp in mono.nontrivial])
    coarse = edge_integrals(mono, differentials, DEFAULT_DENSITY, max_workers)
    fine = edge_integrals(mono, differentials, DEFAULT_DENSITY / 2, max_workers)
    omega = basis.periods(fine)
    scale = max(1.0, float(np.max(np.abs(omega))))
    stability = float(np.max(np.abs(omega - basis.periods(coarse)))) / scale
    if stability > 10 * tol:
        raise ConvergenceError(
            f"{curve.name}: periods moved by {stability:.3g} under panel doubling"
        )
    null_residual = float(np.max(np.abs(basis.null_periods(fine)))) / scale
    if null_residual > 10 * tol:
        raise ConvergenceError(
            f"{curve.name}: null-homologous cycles have periods up to {null_residual:.3g}"
        )
    logger.info(
        "%s: %d x %d periods, stability %.2g, null residual %.2g",
        curve.name, *omega.shape, stability, null_residual,
    )
    return PeriodMatrix(
        tuple(d.name for d in differentials), omega, basis, mono, stability, null_residual
    )


def omega_ns(tol: float = 1e-10, bits: int = DEFAULT_BITS, **kwargs: Any) -> PeriodMatrix:
    """4 x 8 periods of the pulled-back differentials of E_A, ..., E_D on X_ns(11)."""
    marked = kwargs.pop("marked", None)
    return period_matrix(plane_model_xns(marked), xns_differentials(), tol, bits, **kwargs)


def omega_genus2(tol: float = 1e-10, bits: int = DEFAULT_BITS, **kwargs: Any) -> PeriodMatrix:
    """2 x 4 periods of 44 dx/y and 4(3x - 1) dx/y on the genus-2 quotient."""
    return period_matrix(genus2_curve(), genus2_differentials(), tol, bits, **kwargs)
