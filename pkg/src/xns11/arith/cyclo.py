"""Exact arithmetic in Q(zeta_11) and its subfields Q(eps) and Q(sqrt(-11))."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

from xns11.core.errors import NotInSubfieldError

P = 11
DEGREE = P - 1

# Minimal polynomial of eps = zeta + zeta^-1, highest degree first.
EPS_MINPOLY = (1, 1, -4, -3, 3, 1)

Scalar = Union[int, Fraction]


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


class CycElem:
    """Element of Q(zeta) stored as integer numerators over a common denominator.

    The coordinates are taken in the basis zeta^0..zeta^9, with zeta^10 reduced
    through 1 + zeta + ... + zeta^10 = 0.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, coords: Iterable[Scalar] = (), den: int = 1):
        values = [Fraction(c) for c in coords]
        if len(values) > P:
            folded = [Fraction(0)] * P
            for k, c in enumerate(values):
                folded[k % P] += c
            values = folded
        values += [Fraction(0)] * (P - len(values))
        top = values[DEGREE]
        reduced = [c - top for c in values[:DEGREE]]
        common = _lcm(c.denominator for c in reduced)
        nums = tuple(int(c * common) for c in reduced)
        self._num, self._den = _normalize(nums, common * den)

    @classmethod
    def _raw(cls, num: tuple[int, ...], den: int) -> CycElem:
        obj = cls.__new__(cls)
        obj._num, obj._den = _normalize(num, den)
        return obj

    # ── Constructors ──────────────────────────────────────────────────

    @classmethod
    def zero(cls) -> CycElem:
        return cls._raw((0,) * DEGREE, 1)

    @classmethod
    def one(cls) -> CycElem:
        return cls.from_scalar(1)

    @classmethod
    def from_scalar(cls, c: Scalar) -> CycElem:
        c = Fraction(c)
        return cls._raw((c.numerator,) + (0,) * (DEGREE - 1), c.denominator)

    @classmethod
    def zeta_power(cls, k: int) -> CycElem:
        k %= P
        if k == DEGREE:
            return cls._raw((-1,) * DEGREE, 1)
        num = [0] * DEGREE
        num[k] = 1
        return cls._raw(tuple(num), 1)

    @classmethod
    def epsilon(cls) -> CycElem:
        return cls.zeta_power(1) + cls.zeta_power(-1)

    @classmethod
    def from_eps(cls, coeffs: Sequence[Scalar]) -> CycElem:
        """Build sum(c_i * eps^i)."""
        eps = _eps_powers(max(len(coeffs), 1))
        out = cls.zero()
        for c, e in zip(coeffs, eps):
            if c:
                out = out + e * c
        return out

    # ── Accessors ─────────────────────────────────────────────────────

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self._den) for n in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise NotInSubfieldError(f"{self!r} is not rational")
        return Fraction(self._num[0], self._den)

    # ── Arithmetic ────────────────────────────────────────────────────

    def _coerce(self, other: object) -> CycElem | None:
        if isinstance(other, CycElem):
            return other
        if isinstance(other, (int, Fraction)):
            return CycElem.from_scalar(other)
        return None

    def __add__(self, other: object) -> CycElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = self._den * o._den // math.gcd(self._den, o._den)
        fa, fb = den // self._den, den // o._den
        return CycElem._raw(tuple(a * fa + b * fb for a, b in zip(self._num, o._num)), den)

    __radd__ = __add__

    def __neg__(self) -> CycElem:
        return CycElem._raw(tuple(-a for a in self._num), self._den)

    def __sub__(self, other: object) -> CycElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CycElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CycElem:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CycElem._raw(
                tuple(a * c.numerator for a in self._num), self._den * c.denominator
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyc_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> CycElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyc_mul(self, cyc_inv(o))

    def __rtruediv__(self, other: object) -> CycElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyc_mul(o, cyc_inv(self))

    def __pow__(self, n: int) -> CycElem:
        if n < 0:
            return cyc_inv(self) ** (-n)
        result = CycElem.one()
        base = self
        while n:
            if n & 1:
                result = cyc_mul(result, base)
            n >>= 1
            if n:
                base = cyc_mul(base, base)
        return result

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return "CycElem(" + (" + ".join(terms) or "0") + ")"

    # ── Field structure ───────────────────────────────────────────────

    def galois(self, d: int) -> CycElem:
        return galois_apply(GaloisAuto(d), self)

    def conjugate(self) -> CycElem:
        return galois_apply(COMPLEX_CONJUGATION, self)

    def trace(self) -> Fraction:
        """Trace from Q(zeta) to Q."""
        return Fraction(DEGREE * self._num[0] - sum(self._num[1:]), self._den)

    def norm(self) -> Fraction:
        prod = self
        for d in range(2, P):
            prod = cyc_mul(prod, self.galois(d))
        return prod.rational()

    def embed(self, k: int = 1, bits: int = 256) -> mpmath.mpc:
        """Complex value under zeta -> exp(2*pi*i*k/11)."""
        with mpmath.workprec(bits):
            z = mpmath.expjpi(mpmath.mpf(2 * k) / P)
            acc = mpmath.mpc(0)
            for n in reversed(self._num):
                acc = acc * z + n
            return acc / self._den

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> CycElem:
        return cls(Fraction(s) for s in data)


def _normalize(num: tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num, den = tuple(-a for a in num), -den
    g = math.gcd(den, *num)
    if g > 1:
        num, den = tuple(a // g for a in num), den // g
    if not any(num):
        den = 1
    return num, den


def cyc_mul(a: CycElem, b: CycElem) -> CycElem:
    """Exact product in reduced coordinates."""
    acc = [0] * P
    for i, x in enumerate(a._num):
        if not x:
            continue
        for j, y in enumerate(b._num):
            if y:
                acc[(i + j) % P] += x * y
    top = acc[DEGREE]
    return CycElem._raw(tuple(c - top for c in acc[:DEGREE]), a._den * b._den)


def cyc_inv(a: CycElem) -> CycElem:
    """Inverse through the product of the nine non-trivial conjugates."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(zeta)")
    co = CycElem.one()
    for d in range(2, P):
        co = cyc_mul(co, a.galois(d))
    norm = cyc_mul(a, co).rational()
    return co * (1 / norm)


@dataclass(frozen=True)
class GaloisAuto:
    """The automorphism zeta -> zeta^exponent."""

    exponent: int

    def __post_init__(self) -> None:
        if self.exponent % P == 0:
            raise ValueError(f"exponent {self.exponent} is not a unit mod {P}")
        object.__setattr__(self, "exponent", self.exponent % P)

    def __call__(self, a: CycElem) -> CycElem:
        return galois_apply(self, a)

    def __pow__(self, n: int) -> GaloisAuto:
        return GaloisAuto(pow(self.exponent, n, P))

    def compose(self, other: GaloisAuto) -> GaloisAuto:
        return GaloisAuto(self.exponent * other.exponent)


IDENTITY = GaloisAuto(1)
SIGMA = GaloisAuto(9)
COMPLEX_CONJUGATION = GaloisAuto(10)


def galois_apply(g: GaloisAuto, a: CycElem) -> CycElem:
    if g.exponent == 1:
        return a
    acc = [0] * P
    for k, c in enumerate(a._num):
        acc[(k * g.exponent) % P] += c
    top = acc[DEGREE]
    return CycElem._raw(tuple(c - top for c in acc[:DEGREE]), a._den)


def legendre(a: int, p: int = P) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=1)
def sqrt_m11() -> CycElem:
    """The Gauss sum, a square root of -11 with positive imaginary part."""
    return CycElem(legendre(k) for k in range(P))


@lru_cache(maxsize=None)
def _eps_powers(n: int) -> tuple[CycElem, ...]:
    eps = CycElem.epsilon()
    out = [CycElem.one()]
    for _ in range(1, n):
        out.append(out[-1] * eps)
    return tuple(out)


def eps_coords(a: CycElem) -> tuple[Fraction, ...]:
    """Coordinates of a real element in the basis 1, eps, ..., eps^4."""
    if a.conjugate() != a:
        raise NotInSubfieldError(f"{a!r} does not lie in Q(eps)")
    c = a.coords
    # Lifting with zeta^10 coordinate zero, a real element is symmetric in k <-> 11-k.
    out = [c[0], Fraction(0), Fraction(0), Fraction(0), Fraction(0)]
    for k in range(1, 6):
        if not c[k]:
            continue
        sym = [Fraction(0)] * 5
        for i, v in enumerate(_SYMMETRIC_EPS[k - 1]):
            sym[i] = Fraction(v)
        out = [o + c[k] * s for o, s in zip(out, sym)]
    return tuple(out)


_SYMMETRIC_EPS = (
    (0, 1, 0, 0, 0),
    (-2, 0, 1, 0, 0),
    (0, -3, 0, 1, 0),
    (2, 0, -4, 0, 1),
    (-1, 2, 3, -1, -1),
)


def real_embeddings(bits: int = 256) -> list[mpmath.mpf]:
    """The five conjugates 2cos(2*pi*j/11) of eps."""
    with mpmath.workprec(bits):
        return [2 * mpmath.cos(2 * mpmath.pi * j / P) for j in range(1, 6)]


def sqrt_in_real_subfield(a: CycElem, bits: int = 256) -> CycElem | None:
    """Exact square root of a in Q(eps), or None when a is not a square there."""
    coords = eps_coords(a)
    if a.is_zero():
        return CycElem.zero()
    scale = _lcm(c.denominator for c in coords)
    target = a * (scale * scale)
    tc = eps_coords(target)
    roots = real_embeddings(bits)
    with mpmath.workprec(bits):
        values = [sum(int(c) * r**i for i, c in enumerate(tc)) for r in roots]
        if any(v < 0 for v in values):
            return None
        sq = [mpmath.sqrt(v) for v in values]
        vander = mpmath.matrix([[r**i for i in range(5)] for r in roots])
        for signs in itertools.product((1, -1), repeat=4):
            rhs = mpmath.matrix([sq[0]] + [s * v for s, v in zip(signs, sq[1:])])
            sol = mpmath.lu_solve(vander, rhs)
            cand = [int(mpmath.nint(x)) for x in sol]
            root = CycElem.from_eps(cand)
            if root * root == target:
                return root * Fraction(1, scale)
    return None
