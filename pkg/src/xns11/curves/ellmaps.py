"""Weierstrass models, the group law and the explicit maps between the level-121 curves.

Every formula here works over three coefficient domains: exact q-series (QSeries, with
cyclotomic constants allowed), exact cyclotomic numbers (CycElem) and complex floats
(mpmath). Rational numbers mix with all of them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, NamedTuple, Sequence

import mpmath

from xns11.arith.cyclo import CycElem
from xns11.arith.qexp import QSeries
from xns11.core.errors import DomainMismatchError, PoleError

logger = logging.getLogger(__name__)


class _PointAtInfinity:
    _instance: _PointAtInfinity | None = None

    def __new__(cls) -> _PointAtInfinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "O"


POINT_AT_INFINITY = _PointAtInfinity()


class FunctionPoint(NamedTuple):
    x: Any
    y: Any


Point = FunctionPoint | _PointAtInfinity

_NUMERIC = (mpmath.mpf, mpmath.mpc, float, complex)


def _domain(v: Any) -> str | None:
    if isinstance(v, QSeries):
        return "series"
    if isinstance(v, CycElem):
        return "exact"
    if isinstance(v, (int, Fraction)):
        return None
    if isinstance(v, _NUMERIC):
        return "numeric"
    raise TypeError(f"unsupported coefficient type {type(v).__name__}")


def common_domain(*values: Any) -> str | None:
    """Series absorbs exact constants; numeric values mix only with rationals."""
    found = {d for d in map(_domain, values) if d is not None}
    if "numeric" in found and len(found) > 1:
        raise DomainMismatchError(f"cannot mix domains {sorted(found)}")
    if "series" in found:
        return "series"
    return found.pop() if found else None


def lift(c: Any, domain: str | None) -> Any:
    """Rational constants become mpf in the numeric domain; mpmath does not take Fraction."""
    if domain == "numeric" and isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return c


def is_zero(v: Any, scale: Any = 1) -> bool:
    """Exact zero test, or |v| below the working precision relative to scale."""
    if isinstance(v, QSeries):
        return v.is_zero()
    if isinstance(v, CycElem):
        return v.is_zero()
    if isinstance(v, (int, Fraction)):
        return v == 0
    eps = mpmath.mpf(2) ** (-(mpmath.mp.prec * 3 // 4))
    return abs(v) <= eps * max(1, abs(scale))


def divide(a: Any, b: Any) -> Any:
    if is_zero(b):
        raise PoleError(f"division by a vanishing {type(b).__name__}")
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / b
    domain = common_domain(a, b)
    return lift(a, domain) / lift(b, domain)


def horner(coeffs: Sequence[Any], x: Any) -> Any:
    """Evaluate a polynomial given highest degree first."""
    acc: Any = coeffs[0]
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


# ── Models ────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    name: str
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    @classmethod
    def from_ainvs(cls, name: str, ainvs: Sequence[int | Fraction]) -> WeierstrassModel:
        a1, a2, a3, a4, a6 = (Fraction(a) for a in ainvs)
        model = cls(name, a1, a2, a3, a4, a6)
        if model.discriminant == 0:
            raise ValueError(f"{name}: singular model {list(ainvs)}")
        return model

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def coefficients(self, domain: str | None) -> tuple[Any, ...]:
        return tuple(lift(a, domain) for a in self.ainvs)

    @property
    def b2(self) -> Fraction:
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self) -> Fraction:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -(self.b2**3) + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def residual(self, point: FunctionPoint) -> Any:
        x, y = point
        a1, a2, a3, a4, a6 = self.coefficients(common_domain(x, y))
        return y * y + a1 * x * y + a3 * y - (((x + a2) * x + a4) * x + a6)

    def contains(self, point: Point, tol: float | None = None) -> bool:
        if point is POINT_AT_INFINITY:
            return True
        r = self.residual(point)
        if tol is None:
            return is_zero(r, abs(point.x) ** 3 if _domain(r) == "numeric" else 1)
        return abs(r) <= tol

    def negate(self, point: Point) -> Point:
        if point is POINT_AT_INFINITY:
            return point
        x, y = point
        a1, _, a3, _, _ = self.coefficients(common_domain(x, y))
        return FunctionPoint(x, -y - a1 * x - a3)

    def add(self, p: Point, q: Point) -> Point:
        return ell_add(self, p, q)

    def double(self, p: Point) -> Point:
        return ell_add(self, p, p)

    def multiply(self, n: int, p: Point) -> Point:
        if n < 0:
            return self.multiply(-n, self.negate(p))
        result: Point = POINT_AT_INFINITY
        base = p
        while n:
            if n & 1:
                result = ell_add(self, result, base)
            n >>= 1
            if n:
                base = ell_add(self, base, base)
        return result


@dataclass(frozen=True)
class HyperellipticModel:
    """y^2 = scale * product of the given polynomials in x (coefficients highest first)."""

    name: str
    factors: tuple[tuple[int, ...], ...]
    scale: int = 1

    def rhs(self, x: Any) -> Any:
        out: Any = self.scale
        for f in self.factors:
            out = out * horner(f, x)
        return out

    def residual(self, point: FunctionPoint) -> Any:
        x, y = point
        common_domain(x, y)
        return y * y - self.rhs(x)

    def contains(self, point: FunctionPoint, tol: float | None = None) -> bool:
        r = self.residual(point)
        return is_zero(r) if tol is None else abs(r) <= tol


E_A = WeierstrassModel.from_ainvs("E_A", (1, 1, 1, -30, -76))
E_B = WeierstrassModel.from_ainvs("E_B", (0, -1, 1, -7, 10))
E_C = WeierstrassModel.from_ainvs("E_C", (1, 1, 0, -2, -7))
E_D = WeierstrassModel.from_ainvs("E_D", (0, -1, 1, -40, -221))

CURVES = {"A": E_A, "B": E_B, "C": E_C, "D": E_D}

# Cubic factors of the genus-2 quotient; the second one also defines the double cover.
CUBIC_A = (4, -4, -28, 41)
CUBIC_D = (4, 7, -6, 19)

GENUS2 = HyperellipticModel("genus2", (CUBIC_A, CUBIC_D), scale=-1)
XNS_COVER = HyperellipticModel("xns11", (CUBIC_D,), scale=-1)

P_GENERATOR = FunctionPoint(Fraction(4), Fraction(-6))


# ── Group law ─────────────────────────────────────────────────────────


def ell_add(model: WeierstrassModel, p: Point, q: Point) -> Point:
    """Chord-tangent sum in long Weierstrass form."""
    if p is POINT_AT_INFINITY:
        return q
    if q is POINT_AT_INFINITY:
        return p
    x1, y1 = p
    x2, y2 = q
    a1, a2, a3, a4, a6 = model.coefficients(common_domain(x1, y1, x2, y2))
    dx = x2 - x1
    if is_zero(dx, x1):
        tangent = y1 + y2 + a1 * x2 + a3
        if is_zero(tangent, y1):
            return POINT_AT_INFINITY
        num = 3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1
        lam = divide(num, tangent)
        nu = divide(-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1, tangent)
    else:
        lam = divide(y2 - y1, dx)
        nu = divide(y1 * x2 - y2 * x1, dx)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return FunctionPoint(x3, y3)


def translate_by_P(x: Any, y: Any) -> FunctionPoint:
    """Translation by P = (4, -6) on E_B, as a closed formula."""
    d = x - 4
    if is_zero(d, x):
        raise PoleError("translation by P has a pole at x = 4")
    d2 = d * d
    tx = divide(horner((4, 1, -2), x) + 11 * y, d2)
    ty = divide((horner((2, 17, -34), x) + 11 * y) * (1 - 3 * x), d2 * d)
    return FunctionPoint(tx, ty)


def reciprocal(point: FunctionPoint, base: FunctionPoint) -> Point:
    """(x, y) -> (x, -1 - y) + base on E_B; an involution when base is a cusp value."""
    x, y = point
    return ell_add(E_B, FunctionPoint(x, -1 - y), base)


# ── The j-map of X_ns^+(11) ───────────────────────────────────────────

J_QUINTIC = (1, -9, -16, 53, 37, -23)


def j_map(x: Any, y: Any) -> Any:
    """j as the displayed rational function of the Weierstrass coordinates of E_B."""
    common_domain(x, y)
    poles = {"x + 2": x + 2, "x - 4": x - 4, "quintic": horner(J_QUINTIC, x)}
    for label, value in poles.items():
        if is_zero(value, x):
            raise PoleError(f"j has a pole where {label} vanishes")
    a = horner((7, 16, -44), x) + (x + 18) * y
    b = horner((4, 1, -24, -11), x) - horner((1, 3, 5), x) * y
    c = 11 * (y - 5) * horner((1, 3, -6), x) * (horner((3, -3, -14), x) - (2 * x + 3) * y)
    d = (horner((12, 28, -41, -62), x) + horner((3, 20, 37), x) * y) * (
        horner((1, 4, 1, 22), x) - (3 * x - 1) * y
    )
    num = a * a * b**11 * c**3 * d**3
    den = poles["x + 2"] ** 12 * poles["x - 4"] ** 14 * poles["quintic"] ** 11
    return divide(num, den)


def local_expansion_at_origin(model: WeierstrassModel, prec: int) -> FunctionPoint:
    """(x(z), y(z)) near O for the parameter z = -x/y, from the formal group w = -1/y."""
    a1, a2, a3, a4, a6 = model.ainvs
    z = QSeries.monomial(1, 1, prec + 8)
    w = QSeries.monomial(1, 3, prec)
    for _ in range(prec):
        w = z**3 + a1 * z * w + a2 * z * z * w + a3 * w * w + a4 * z * w * w + a6 * w**3
        w = w.truncate_to_order(prec + 3)
    return FunctionPoint(z / w, -1 / w)


def j_limit(point: FunctionPoint) -> Fraction:
    """Value at z = 0 of j along a local expansion."""
    j = j_map(point.x, point.y)
    if j.is_zero():
        return Fraction(0)
    if j.lead < 0:
        raise PoleError(f"j has a pole of order {-j.lead} along the expansion")
    return j.coefficient(0).rational()


def j_at_origin(prec: int = 40) -> Fraction:
    return j_limit(local_expansion_at_origin(E_B, prec))


def j_at_P(prec: int = 40) -> Fraction:
    near = ell_add(E_B, local_expansion_at_origin(E_B, prec), P_GENERATOR)
    return j_limit(near)


def _sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def j_oracle(order: int) -> QSeries:
    """E4^3 / Delta as a q_*-series (q = q_*^11), known modulo q_*^order."""
    terms = max(2, -(-(order + 11) // 11) + 1)
    e4 = QSeries(0, [1] + [240 * _sigma(3, n) for n in range(1, terms)])
    e6 = QSeries(0, [1] + [-504 * _sigma(5, n) for n in range(1, terms)])
    delta = (e4**3 - e6 * e6) * Fraction(1, 1728)
    j = e4**3 / delta
    return j.stretch(11).truncate_to_order(order)


# ── Maps between the curves ───────────────────────────────────────────


def _phi_B(x: Any, y: Any, t: Any) -> FunctionPoint:
    return FunctionPoint(x, y)


def _phi_X(x: Any, y: Any, t: Any) -> FunctionPoint:
    return FunctionPoint(x, (2 * y + 1) * t)


def _phi_C(x: Any, y: Any, t: Any) -> FunctionPoint:
    return FunctionPoint(-x - 1, divide(t + x + 1, 2))


def _pi_A(x: Any, y: Any) -> FunctionPoint:
    d = horner(CUBIC_A, x)
    tx = divide(horner((-13, 13, 102, -147), x), d)
    ty = divide(horner((-8, 19, -10, 6), x) * y, 2 * d * d) + divide(
        horner((9, -9, -74, 106), x), 2 * d
    )
    return FunctionPoint(tx, ty)


def _pi_D(x: Any, y: Any) -> FunctionPoint:
    d = horner(CUBIC_D, x)
    tx = divide(horner((27, 138, -101, -749), x), d)
    ty = divide(divide(121 * horner((1, -1, -29, -53), x) * y, d * d) - 1, 2)
    return FunctionPoint(tx, ty)


@dataclass(frozen=True)
class CurveMap:
    name: str
    formula: Callable[..., FunctionPoint]
    arity: int
    target: WeierstrassModel | HyperellipticModel


MAPS: dict[str, CurveMap] = {
    "phi_B": CurveMap("phi_B", _phi_B, 3, E_B),
    "phi_X": CurveMap("phi_X", _phi_X, 3, GENUS2),
    "phi_C": CurveMap("phi_C", _phi_C, 3, E_C),
    "pi_A": CurveMap("pi_A", _pi_A, 2, E_A),
    "pi_D": CurveMap("pi_D", _pi_D, 2, E_D),
}


def apply_map(name: str, point: Sequence[Any]) -> FunctionPoint:
    """Apply phi_B, phi_X, phi_C (on (x, y, t)) or pi_A, pi_D (on genus-2 points)."""
    if name not in MAPS:
        raise KeyError(f"Unknown map: {name!r}. Available: {list(MAPS.keys())}")
    m = MAPS[name]
    if len(point) != m.arity:
        raise ValueError(f"{name} takes {m.arity} coordinates, got {len(point)}")
    common_domain(*point)
    return m.formula(*point)


def map_residual(name: str, point: Sequence[Any]) -> Any:
    """Residual of the image in the map's target equation."""
    return MAPS[name].target.residual(apply_map(name, point))
