"""Truncated q_*-expansions with Q(zeta) coefficients and rational leading exponent."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from xns11.arith import packing
from xns11.arith.cyclo import DEGREE, CycElem, GaloisAuto, P, eps_coords
from xns11.core.errors import IncompatibleSeriesError

logger = logging.getLogger(__name__)

LEAD_DENOMINATOR = 132

Coefficient = Union[CycElem, int, Fraction]


def _as_cyc(c: Coefficient) -> CycElem:
    return c if isinstance(c, CycElem) else CycElem.from_scalar(c)


class QSeries:
    """q_*^lead * (c_0 + c_1 q_* + ... + c_{prec-1} q_*^{prec-1}) + O(q_*^{lead+prec}).

    Coefficients are held as one integer array of shape (prec, 10) over a common
    denominator. A series with no known non-zero coefficient is the zero series; its
    ``lead`` then records the absolute precision bound.
    """

    __slots__ = ("lead", "prec", "_num", "_den")

    def __init__(
        self, lead: Fraction | int, coeffs: Iterable[Coefficient], prec: int | None = None
    ):
        cyc = [_as_cyc(c) for c in coeffs]
        if prec is None:
            prec = len(cyc)
        if len(cyc) > prec:
            cyc = cyc[:prec]
        den = 1
        for c in cyc:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = packing.zeros(prec)
        for i, c in enumerate(cyc):
            f = den // c.denominator
            num[i] = [x * f for x in c.numerators]
        self._assign(*_normalized(Fraction(lead), num, den))

    def _assign(self, lead: Fraction, num: np.ndarray, den: int) -> None:
        self.lead = lead
        self.prec = len(num)
        self._num = num
        self._den = den

    @classmethod
    def _make(cls, lead: Fraction, num: np.ndarray, den: int) -> QSeries:
        obj = cls.__new__(cls)
        obj._assign(*_normalized(lead, num, den))
        return obj

    # ── Constructors ──────────────────────────────────────────────────

    @classmethod
    def zero(cls, order: Fraction | int) -> QSeries:
        return cls._make(Fraction(order), packing.zeros(0), 1)

    @classmethod
    def constant(cls, c: Coefficient, prec: int) -> QSeries:
        return cls(0, [c], prec)

    @classmethod
    def monomial(cls, c: Coefficient, exponent: Fraction | int, prec: int) -> QSeries:
        return cls(exponent, [c], prec)

    @classmethod
    def from_array(cls, lead: Fraction | int, num: np.ndarray, den: int = 1) -> QSeries:
        """Wrap an integer array of shape (prec, 10) without per-term conversion."""
        if num.ndim != 2 or num.shape[1] != DEGREE:
            raise IncompatibleSeriesError(f"expected shape (n, {DEGREE}), got {num.shape}")
        return cls._make(Fraction(lead), num, den)

    # ── Accessors ─────────────────────────────────────────────────────

    @property
    def order(self) -> Fraction:
        """Absolute precision: the series is known modulo q_*^order."""
        return self.lead + self.prec

    @property
    def valuation(self) -> Fraction:
        if self.is_zero():
            raise IncompatibleSeriesError("valuation of the zero series")
        return self.lead

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return self.prec == 0

    def __len__(self) -> int:
        return self.prec

    def coeff_at(self, index: int) -> CycElem:
        return CycElem._raw(tuple(self._num[index]), self._den)

    @property
    def coeffs(self) -> list[CycElem]:
        return [self.coeff_at(i) for i in range(self.prec)]

    def leading_coefficient(self) -> CycElem:
        if self.is_zero():
            raise IncompatibleSeriesError("leading coefficient of the zero series")
        return self.coeff_at(0)

    def coefficient(self, exponent: Fraction | int) -> CycElem:
        """Coefficient of q_*^exponent; raises if the exponent is not known."""
        exponent = Fraction(exponent)
        if exponent >= self.order:
            raise IncompatibleSeriesError(
                f"exponent {exponent} beyond precision O(q^{self.order})"
            )
        offset = exponent - self.lead
        if offset < 0:
            return CycElem.zero()
        if offset.denominator != 1:
            raise IncompatibleSeriesError(f"exponent {exponent} not on the series grid")
        return self.coeff_at(int(offset))

    def eps_table(self, start: Fraction | int, count: int) -> list[tuple[Fraction, ...]]:
        """Q(eps) coordinates of the coefficients of q_*^start .. q_*^(start+count-1)."""
        return [eps_coords(self.coefficient(Fraction(start) + n)) for n in range(count)]

    # ── Ring operations ───────────────────────────────────────────────

    def __add__(self, other: object) -> QSeries:
        if isinstance(other, QSeries):
            return qs_add(self, other)
        if isinstance(other, (CycElem, int, Fraction)):
            return _add_constant(self, _as_cyc(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries._make(self.lead, -self._num, self._den)

    def __sub__(self, other: object) -> QSeries:
        if isinstance(other, (QSeries, CycElem, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: object) -> QSeries:
        return (-self) + other

    def __mul__(self, other: object) -> QSeries:
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (CycElem, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QSeries:
        if isinstance(other, QSeries):
            return qs_mul(self, qs_inv(other))
        if isinstance(other, (CycElem, int, Fraction)):
            return self.scale(1 / _as_cyc(other))
        return NotImplemented

    def __rtruediv__(self, other: object) -> QSeries:
        if isinstance(other, (CycElem, int, Fraction)):
            return qs_inv(self).scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> QSeries:
        if n < 0:
            return qs_inv(self) ** (-n)
        result: QSeries | None = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else qs_mul(result, base)
            n >>= 1
            if n:
                base = qs_mul(base, base)
        if result is None:
            return QSeries.constant(1, self.prec)
        return result

    def scale(self, c: Coefficient) -> QSeries:
        c = _as_cyc(c)
        if c.is_zero():
            return QSeries.zero(self.order)
        if c.is_rational():
            r = c.rational()
            return QSeries._make(self.lead, self._num * r.numerator, self._den * r.denominator)
        row = np.array([list(c.numerators)], dtype=object)
        return QSeries._make(
            self.lead, packing.mul_rows(self._num, row, self.prec), self._den * c.denominator
        )

    def shift(self, k: Fraction | int) -> QSeries:
        """Multiply by q_*^k."""
        return QSeries._make(self.lead + k, self._num, self._den)

    def stretch(self, k: int) -> QSeries:
        """Substitute q_* -> q_*^k."""
        num = packing.zeros(self.prec * k)
        num[::k] = self._num
        return QSeries._make(self.lead * k, num, self._den)

    def truncate(self, prec: int) -> QSeries:
        return QSeries._make(self.lead, self._num[:prec], self._den)

    def truncate_to_order(self, order: Fraction | int) -> QSeries:
        keep = order - self.lead
        if keep >= self.prec:
            return self
        return self.truncate(max(0, int(keep)))

    def galois_apply(self, g: GaloisAuto) -> QSeries:
        """Coefficientwise action zeta -> zeta^d."""
        if g.exponent == 1 or self.is_zero():
            return self
        n = len(self._num)
        full = np.concatenate([self._num, packing.zeros(n)[:, :1]], axis=1)
        moved = np.empty_like(full)
        for k in range(P):
            moved[:, (k * g.exponent) % P] = full[:, k]
        reduced = moved[:, :DEGREE] - moved[:, DEGREE:]
        return QSeries._make(self.lead, reduced, self._den)

    # ── Text format ───────────────────────────────────────────────────

    def dumps(self) -> str:
        """One line per term: ``exponent : 10 rational coords``."""
        lines = [f"# lead={self.lead} prec={self.prec} order={self.order}"]
        for i in range(self.prec):
            coords = " ".join(str(x) for x in self.coeff_at(i).coords)
            lines.append(f"{self.lead + i} : {coords}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> QSeries:
        header, *body = [ln for ln in text.splitlines() if ln.strip()]
        fields = dict(item.split("=") for item in header.lstrip("# ").split())
        lead = Fraction(fields["lead"])
        coeffs = []
        for line in body:
            _, coords = line.split(":")
            coeffs.append(CycElem(Fraction(x) for x in coords.split()))
        if not coeffs:
            return cls.zero(Fraction(fields["order"]))
        return cls(lead, coeffs, int(fields["prec"]))

    def __repr__(self) -> str:
        if self.is_zero():
            return f"QSeries(0 + O(q^{self.order}))"
        return f"QSeries(lead={self.lead}, prec={self.prec}, c0={self.coeff_at(0)!r})"


def _normalized(lead: Fraction, num: np.ndarray, den: int) -> tuple[Fraction, np.ndarray, int]:
    if LEAD_DENOMINATOR % lead.denominator:
        raise IncompatibleSeriesError(
            f"leading exponent {lead} has denominator outside 1/{LEAD_DENOMINATOR}"
        )
    skip = 0
    for row in num:
        if any(row):
            break
        skip += 1
    if skip:
        num = num[skip:]
        lead += skip
    if len(num) == 0:
        return lead, packing.zeros(0), 1
    g = packing.row_gcd(num, den)
    if g > 1:
        num = num // g
        den //= g
    return lead, num, den


def _aligned(f: QSeries, g: QSeries) -> tuple[Fraction, int, np.ndarray, np.ndarray, int]:
    gap = f.lead - g.lead
    if gap.denominator != 1:
        raise IncompatibleSeriesError(
            f"incompatible fractional parts: q^{f.lead} and q^{g.lead}"
        )
    lead = min(f.lead, g.lead)
    order = min(f.order, g.order)
    n = max(0, int(order - lead))
    den = f._den * g._den // math.gcd(f._den, g._den)
    out = []
    for s in (f, g):
        arr = packing.zeros(n)
        start = int(s.lead - lead)
        take = max(0, min(s.prec, n - start))
        if take:
            arr[start : start + take] = s._num[:take] * (den // s._den)
        out.append(arr)
    return lead, n, out[0], out[1], den


def qs_add(f: QSeries, g: QSeries) -> QSeries:
    if f.is_zero() and g.is_zero():
        return QSeries.zero(min(f.order, g.order))
    if f.is_zero() or g.is_zero():
        nonzero, zero = (g, f) if f.is_zero() else (f, g)
        if zero.order <= nonzero.lead:
            return QSeries.zero(zero.order)
        if (zero.order - nonzero.lead).denominator != 1:
            raise IncompatibleSeriesError(
                f"incompatible fractional parts: q^{f.lead} and q^{g.lead}"
            )
        return nonzero.truncate_to_order(zero.order)
    lead, _, a, b, den = _aligned(f, g)
    return QSeries._make(lead, a + b, den)


def _add_constant(f: QSeries, c: CycElem) -> QSeries:
    if c.is_zero() or f.order <= 0:
        return f
    return qs_add(f, QSeries(0, [c], int(f.order) if f.order.denominator == 1 else 1))


def qs_mul(f: QSeries, g: QSeries) -> QSeries:
    lead = f.lead + g.lead
    prec = min(f.prec, g.prec)
    if prec == 0:
        return QSeries.zero(lead)
    num = packing.mul_rows(f._num, g._num, prec)
    return QSeries._make(lead, num, f._den * g._den)


def qs_inv(f: QSeries) -> QSeries:
    """Newton iteration h <- h(2 - f h) on the unit part of f."""
    if f.is_zero():
        raise IncompatibleSeriesError("inverse of the zero series")
    unit = QSeries._make(Fraction(0), f._num, f._den)
    c0 = unit.coeff_at(0)
    h = QSeries(0, [1 / c0], 1)
    n = 1
    while n < unit.prec:
        n = min(2 * n, unit.prec)
        u = unit.truncate(n)
        h = QSeries(0, h.coeffs, n)
        e = qs_mul(u, h)
        correction = (-e).truncate(n) + 2
        h = qs_mul(h, correction).truncate(n)
    return h.shift(-f.lead)


def qs_normalize(f: QSeries) -> tuple[QSeries, CycElem]:
    c = f.leading_coefficient()
    return f.scale(1 / c), c


def qs_derive(f: QSeries) -> QSeries:
    """Termwise d/dq_*."""
    if f.is_zero():
        return QSeries.zero(f.lead - 1)
    out = packing.zeros(f.prec)
    den = f._den * f.lead.denominator
    for i in range(f.prec):
        e = (f.lead + i) * f.lead.denominator
        out[i] = f._num[i] * int(e)
    return QSeries._make(f.lead - 1, out, den)


def eval_poly(coeffs: Sequence[Coefficient], x: QSeries) -> QSeries:
    """Horner evaluation of sum(coeffs[i] * x^i) at a series."""
    acc = QSeries.constant(coeffs[-1], x.prec)
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def first_disagreement(f: QSeries, g: QSeries) -> Fraction | None:
    """Exponent of the first differing coefficient, or None when f = g to precision."""
    diff = f - g
    return None if diff.is_zero() else diff.lead
