"""Path pieces in the t-plane and Gauss-Legendre panels along them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

GL_NODES = 16
DEFAULT_DENSITY = 0.5
MAX_PANELS = 100_000


@lru_cache(maxsize=None)
def gauss_legendre(n: int = GL_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [0, 1], nodes ascending."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    def point(self, s):
        return self.start + (self.end - self.start) * s

    def velocity(self, s):
        return (self.end - self.start) * np.ones_like(s, dtype=complex)

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    """center + radius * exp(i (start_angle + sweep s)); positive sweep is counterclockwise."""

    center: complex
    radius: float
    start_angle: float
    sweep: float = 2 * math.pi

    def point(self, s):
        return self.center + self.radius * np.exp(1j * (self.start_angle + self.sweep * s))

    def velocity(self, s):
        return 1j * self.sweep * self.radius * np.exp(1j * (self.start_angle + self.sweep * s))

    @property
    def length(self) -> float:
        return abs(self.sweep) * self.radius


def distance_to_segment(p: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    s = min(1.0, max(0.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(p - (a + s * d))


def panel_breaks(
    piece: Segment | Arc, singularities: np.ndarray, density: float = DEFAULT_DENSITY
) -> list[float]:
    """Breakpoints 0 = s_0 < ... < s_k = 1 with each panel shorter than density times its
    distance to the nearest singularity."""
    speed = piece.length
    if speed == 0:
        return [0.0, 1.0]
    breaks = [0.0]
    s = 0.0
    while s < 1.0:
        here = complex(piece.point(s))
        dist = float(np.min(np.abs(singularities - here))) if len(singularities) else math.inf
        h = min(1.0 - s, density * dist / speed, 0.25)
        if h <= 0 or len(breaks) > MAX_PANELS:
            raise ValueError(f"path touches a singularity near t = {here}")
        s = 1.0 if 1.0 - s - h < 1e-12 else s + h
        breaks.append(s)
    return breaks
