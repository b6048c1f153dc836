"""Hermite and Smith normal forms of integer matrices, with unimodular transforms.

Matrices are numpy arrays of dtype object holding Python ints, so entries never
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy


def as_integer_matrix(m: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    arr = np.array(m, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    When a divides b the first row is (1, 0).
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign
    m = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while m[1, 0] != 0:
        q = m[0, 0] // m[1, 0]
        m[0] -= q * m[1]
        m = m[::-1].copy()
    g = m[0, 0]
    out = m[:, 1:] * np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        out[1] = [-b_sign * b // g, a_sign * a // g]
    else:
        out = np.eye(2, dtype=object)
    return out


def inv_2x2_det1(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=object)


def determinant(m: np.ndarray) -> int:
    """Exact determinant of a square integer matrix."""
    return int(sympy.Matrix(m.tolist()).det(method="bareiss"))


# ── Hermite normal form ───────────────────────────────────────────────


def hnf(m: Sequence[Sequence[int]] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite form: (H, U) with U unimodular and U @ M = H.

    H is in row echelon form with positive pivots and the entries above each pivot
    reduced into [0, pivot).
    """
    h = as_integer_matrix(m).copy()
    rows, cols = h.shape
    u = np.eye(rows, dtype=object)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i, c] == 0:
                continue
            g = exgcd(h[r, c], h[i, c])
            h[[r, i]] = g @ h[[r, i]]
            u[[r, i]] = g @ u[[r, i]]
        if h[r, c] == 0:
            continue
        if h[r, c] < 0:
            h[r] = -h[r]
            u[r] = -u[r]
        for i in range(r):
            q = h[i, c] // h[r, c]
            if q:
                h[i] -= q * h[r]
                u[i] -= q * u[r]
        r += 1
    return h, u


# ── Smith normal form ─────────────────────────────────────────────────


@dataclass
class SNFResult:
    """U @ M @ V = diag(factors), with U and V unimodular; left_inverse is U^-1."""

    factors: tuple[int, ...]
    left: np.ndarray
    right: np.ndarray
    left_inverse: np.ndarray

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d != 0)

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d != 1)

    @property
    def order(self) -> int:
        """Order of the cokernel; 0 when it is infinite."""
        return math.prod(self.factors)

    def elementary_divisors(self) -> list[int]:
        return elementary_divisors(self.factors)

    def group_string(self) -> str:
        return group_string(self.factors)


def _left_op(d: np.ndarray, u: np.ndarray, u_inv: np.ndarray, g: np.ndarray, i: int, j: int):
    d[[i, j]] = g @ d[[i, j]]
    u[[i, j]] = g @ u[[i, j]]
    u_inv[:, [i, j]] = u_inv[:, [i, j]] @ inv_2x2_det1(g)


def _clear_column(d: np.ndarray, u: np.ndarray, u_inv: np.ndarray, i: int) -> bool:
    if all(d[j, i] == 0 for j in range(i + 1, d.shape[0])):
        return False
    for j in range(i + 1, d.shape[0]):
        if d[j, i] != 0:
            _left_op(d, u, u_inv, exgcd(d[i, i], d[j, i]), i, j)
    return True


def _clear_row(d: np.ndarray, v: np.ndarray, i: int) -> bool:
    if all(d[i, j] == 0 for j in range(i + 1, d.shape[1])):
        return False
    for j in range(i + 1, d.shape[1]):
        if d[i, j] == 0:
            continue
        g = exgcd(d[i, i], d[i, j]).T
        d[:, [i, j]] = d[:, [i, j]] @ g
        v[:, [i, j]] = v[:, [i, j]] @ g
    return True


def _fix_divisibility(
    d: np.ndarray, u: np.ndarray, u_inv: np.ndarray, v: np.ndarray, i: int, j: int
) -> None:
    a, b = d[i, i], d[j, j]
    if a == 0:
        d[[i, j]] = d[[j, i]]
        u[[i, j]] = u[[j, i]]
        u_inv[:, [i, j]] = u_inv[:, [j, i]]
        d[:, [i, j]] = d[:, [j, i]]
        v[:, [i, j]] = v[:, [j, i]]
        return
    if b % a == 0:
        return
    g = math.gcd(a, b)
    s, t = exgcd(a, b)[0]
    left = np.array([[s, t], [-b // g, a // g]], dtype=object)
    right = np.array([[1, -t * b // g], [1, s * a // g]], dtype=object)
    _left_op(d, u, u_inv, left, i, j)
    d[:, [i, j]] = d[:, [i, j]] @ right
    v[:, [i, j]] = v[:, [i, j]] @ right


def snf(m: Sequence[Sequence[int]] | np.ndarray) -> SNFResult:
    """Smith normal form by alternately clearing rows and columns, then fixing the chain."""
    d = as_integer_matrix(m).copy()
    rows, cols = d.shape
    u = np.eye(rows, dtype=object)
    u_inv = np.eye(rows, dtype=object)
    v = np.eye(cols, dtype=object)
    r = min(rows, cols)
    for i in range(r):
        _clear_column(d, u, u_inv, i)
        while _clear_row(d, v, i) and _clear_column(d, u, u_inv, i):
            pass
    for i in range(r):
        for j in range(i + 1, r):
            _fix_divisibility(d, u, u_inv, v, i, j)
    for i in range(r):
        if d[i, i] < 0:
            d[i] = -d[i]
            u[i] = -u[i]
            u_inv[:, i] = -u_inv[:, i]
    return SNFResult(tuple(int(d[i, i]) for i in range(r)), u, v, u_inv)


def elementary_divisors(factors: Sequence[int]) -> list[int]:
    """Prime-power decomposition of the finite part of prod Z/d."""
    out: list[int] = []
    for d in factors:
        if d not in (0, 1):
            out.extend(p**e for p, e in sympy.factorint(abs(d)).items())
    return sorted(out)


def group_string(factors: Sequence[int]) -> str:
    """(Z/2Z)^2 x (Z/6Z)^2 style rendering of prod Z/d; 'trivial' for the zero group."""
    counts: dict[int, int] = {}
    for d in factors:
        if d != 1:
            counts[d] = counts.get(d, 0) + 1
    if not counts:
        return "trivial"
    parts = []
    for d, k in sorted(counts.items(), key=lambda item: (item[0] == 0, item[0])):
        base = "Z" if d == 0 else f"Z/{d}Z"
        parts.append(base if k == 1 else f"({base})^{k}")
    return " x ".join(parts)
