"""Period lattices of rational elliptic curves by the arithmetic-geometric mean."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from xns11.core.errors import ConvergenceError
from xns11.curves.ellmaps import WeierstrassModel, lift

logger = logging.getLogger(__name__)

DEFAULT_BITS = 128
MAX_AGM_STEPS = 200


def agm(a: mpmath.mpc, b: mpmath.mpc) -> mpmath.mpc:
    """AGM along the optimal branch: each square root is taken with |a - b| <= |a + b|."""
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 4)
    for _ in range(MAX_AGM_STEPS):
        if abs(a - b) <= eps * abs(a):
            return a
        mean = (a + b) / 2
        root = mpmath.sqrt(a * b)
        if abs(mean - root) > abs(mean + root):
            root = -root
        a, b = mean, root
    raise ConvergenceError(f"AGM did not converge in {MAX_AGM_STEPS} steps")


@dataclass(frozen=True)
class EllipticLattice:
    """Z omega1 + Z omega2 with Im(omega2 / omega1) > 0."""

    omega1: mpmath.mpc
    omega2: mpmath.mpc

    @property
    def tau(self) -> mpmath.mpc:
        return self.omega2 / self.omega1

    @property
    def covolume(self) -> mpmath.mpf:
        return abs(mpmath.im(mpmath.conj(self.omega1) * self.omega2))

    def coordinates(self, z: mpmath.mpc) -> tuple[mpmath.mpf, mpmath.mpf]:
        """Real (a, b) with z = a omega1 + b omega2."""
        w = z / self.omega1
        tau = self.tau
        b = mpmath.im(w) / mpmath.im(tau)
        return mpmath.re(w) - b * mpmath.re(tau), b

    def nearest(self, z: mpmath.mpc) -> tuple[int, int]:
        a, b = self.coordinates(z)
        return int(mpmath.nint(a)), int(mpmath.nint(b))

    def distance(self, z: mpmath.mpc) -> mpmath.mpf:
        """Relative distance from z to the nearest lattice vector."""
        m, n = self.nearest(z)
        scale = max(abs(z), abs(self.omega1))
        return abs(z - m * self.omega1 - n * self.omega2) / scale

    def contains(self, z: mpmath.mpc, rel_tol: float = 1e-6) -> bool:
        return self.distance(z) <= rel_tol

    def scaled(self, c: mpmath.mpc) -> EllipticLattice:
        return EllipticLattice(self.omega1 * c, self.omega2 * c)


def gauss_reduce(omega1: mpmath.mpc, omega2: mpmath.mpc) -> tuple[mpmath.mpc, mpmath.mpc]:
    """Reduced oriented basis: |Re tau| <= 1/2 and |tau| >= 1."""
    if mpmath.im(omega2 / omega1) < 0:
        omega2 = -omega2
    for _ in range(MAX_AGM_STEPS):
        n = mpmath.nint(mpmath.re(omega2 / omega1))
        omega2 = omega2 - n * omega1
        if abs(omega2) >= abs(omega1) * (1 - mpmath.mpf(2) ** (-mpmath.mp.prec // 2)):
            return omega1, omega2
        omega1, omega2 = omega2, -omega1
    raise ConvergenceError("lattice reduction did not terminate")


def eisenstein(weight: int, tau: mpmath.mpc) -> mpmath.mpc:
    """Normalized E4 or E6 at tau."""
    factor = {4: 240, 6: -504}[weight]
    q = mpmath.exp(2j * mpmath.pi * tau)
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    total = mpmath.mpc(0)
    qn = q
    n = 1
    while True:
        term = mpmath.mpf(sum(d ** (weight - 1) for d in range(1, n + 1) if n % d == 0)) * qn
        total += term
        if abs(term) < eps and n > 2:
            break
        n += 1
        qn *= q
    return 1 + factor * total


def lattice_invariants(lattice: EllipticLattice) -> tuple[mpmath.mpc, mpmath.mpc]:
    """(g2, g3) of the lattice."""
    tau = lattice.tau
    pi = mpmath.pi
    g2 = (4 * pi**4 / 3) * eisenstein(4, tau) / lattice.omega1**4
    g3 = (8 * pi**6 / 27) * eisenstein(6, tau) / lattice.omega1**6
    return g2, g3


def _real_periods(model: WeierstrassModel) -> tuple[mpmath.mpc, mpmath.mpc]:
    b2, b4, b6 = (lift(b, "numeric") for b in (model.b2, model.b4, model.b6))
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)
    pi = mpmath.pi
    if model.discriminant > 0:
        e1, e2, e3 = sorted((mpmath.re(r) for r in roots), reverse=True)
        w1 = pi / agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
        w2 = 1j * pi / agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
        return mpmath.mpc(w1), mpmath.mpc(w2)
    e1 = mpmath.re(min(roots, key=lambda r: abs(mpmath.im(r))))
    a = 3 * e1 + b2 / 4
    b = mpmath.sqrt(3 * e1**2 + b2 * e1 / 2 + b4 / 2)
    w1 = 2 * pi / agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b + a))
    w2 = -w1 / 2 + 1j * pi / agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b - a))
    return mpmath.mpc(w1), mpmath.mpc(w2)


def agm_lattice(model: WeierstrassModel, bits: int = DEFAULT_BITS) -> EllipticLattice:
    """Reduced period lattice of dx/(2y + a1 x + a3), checked against c4 and c6."""
    with mpmath.workprec(bits + 16):
        w1, w2 = gauss_reduce(*_real_periods(model))
        lattice = EllipticLattice(w1, w2)
        g2, g3 = lattice_invariants(lattice)
        c4 = lift(model.c4, "numeric") / 12
        c6 = lift(model.c6, "numeric") / 216
        err = max(abs(g2 - c4) / max(1, abs(c4)), abs(g3 - c6) / max(1, abs(c6)))
        logger.debug("%s: omega1=%s tau=%s invariant error %s", model.name, w1, lattice.tau, err)
        if err > mpmath.mpf(2) ** (-bits // 2):
            raise ConvergenceError(f"{model.name}: lattice invariants off by {mpmath.nstr(err, 5)}")
    return lattice


def rescale_model(model: WeierstrassModel, u: int | Fraction) -> WeierstrassModel:
    """The model in coordinates (u^2 x, u^3 y): a_i -> u^i a_i."""
    u = Fraction(u)
    weights = (1, 2, 3, 4, 6)
    return WeierstrassModel.from_ainvs(
        f"{model.name}*{u}", [a * u**w for a, w in zip(model.ainvs, weights)]
    )
