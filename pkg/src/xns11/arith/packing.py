"""Kronecker substitution for truncated products with Q(zeta) coefficients.

Each q-term of a series is a length-10 integer vector (coordinates in zeta^0..zeta^9).
A product of two such rows is a polynomial in zeta of degree at most 18, so every
q-term is given 19 byte-aligned slots of a big integer; one big-integer product then
yields all coefficients, which are folded back through zeta^11 = 1 and the reduction
of zeta^10.
"""

from __future__ import annotations

import math

import numpy as np

from xns11.arith.cyclo import DEGREE, P

SLOTS = 2 * DEGREE - 1


def zeros(n: int) -> np.ndarray:
    out = np.empty((n, DEGREE), dtype=object)
    out.fill(0)
    return out


def max_bits(rows: np.ndarray) -> int:
    return max((abs(v).bit_length() for v in rows.ravel()), default=0)


def row_gcd(rows: np.ndarray, den: int) -> int:
    return math.gcd(den, *rows.ravel())


def pack(rows: np.ndarray, width: int) -> int:
    stride = SLOTS * width
    pos = bytearray(len(rows) * stride)
    neg = bytearray(len(rows) * stride)
    for i, row in enumerate(rows):
        base = i * stride
        for k, v in enumerate(row):
            if v > 0:
                pos[base + k * width : base + (k + 1) * width] = v.to_bytes(width, "little")
            elif v < 0:
                neg[base + k * width : base + (k + 1) * width] = (-v).to_bytes(width, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def unpack(value: int, n: int, width: int) -> np.ndarray:
    """Read the first n q-terms of a packed product and reduce them mod Phi_11."""
    slots = n * SLOTS
    half = 1 << (8 * width - 1)
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * slots, "little")
    mask = (1 << (8 * width * slots)) - 1
    raw = ((value + bias) & mask).to_bytes(width * slots, "little")
    out = zeros(n)
    for i in range(n):
        base = i * SLOTS * width
        d = [
            int.from_bytes(raw[base + k * width : base + (k + 1) * width], "little") - half
            for k in range(SLOTS)
        ]
        u = [d[k] + d[k + P] if k + P < SLOTS else d[k] for k in range(P)]
        top = u[DEGREE]
        out[i] = [u[k] - top for k in range(DEGREE)]
    return out


def mul_rows(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """First n q-terms of the product of two coefficient arrays."""
    a, b = a[:n], b[:n]
    if n <= 0:
        return zeros(0)
    if len(a) == 0 or len(b) == 0:
        return zeros(n)
    terms = DEGREE * min(len(a), len(b))
    bits = max_bits(a) + max_bits(b) + terms.bit_length() + 2
    width = max(1, (bits + 7) // 8)
    return unpack(pack(a, width) * pack(b, width), n, width)
