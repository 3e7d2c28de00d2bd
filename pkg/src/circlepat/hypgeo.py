"""Poincare disk primitives.

Points are complex numbers z with |z| < 1.  Distances and radii are
hyperbolic throughout; Euclidean data only appears in the explicit
conversion helpers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

ACOS_SLACK = 1e-12


def clamped_acos(x: float, slack: float = ACOS_SLACK) -> float:
    """arccos that forgives roundoff up to `slack` beyond [-1, 1]."""
    if x > 1.0:
        if x > 1.0 + slack:
            raise ValueError(f"acos argument {x!r} exceeds 1 beyond slack")
        return 0.0
    if x < -1.0:
        if x < -1.0 - slack:
            raise ValueError(f"acos argument {x!r} below -1 beyond slack")
        return math.pi
    return math.acos(x)


def hyp_distance(p: complex, q: complex) -> float:
    """Hyperbolic distance between two points of the open unit disk."""
    num = 2.0 * abs(p - q) ** 2
    den = (1.0 - abs(p) ** 2) * (1.0 - abs(q) ** 2)
    return math.acosh(1.0 + num / den)


def triangle_angle(l_opposite: float, l_adj1: float, l_adj2: float) -> float:
    """Angle opposite `l_opposite` in the hyperbolic triangle with the
    given side lengths (law of cosines)."""
    if min(l_opposite, l_adj1, l_adj2) <= 0.0:
        raise ValueError("triangle sides must be positive")
    c = (math.cosh(l_adj1) * math.cosh(l_adj2) - math.cosh(l_opposite)) / (
        math.sinh(l_adj1) * math.sinh(l_adj2)
    )
    return clamped_acos(c)


@dataclass(frozen=True)
class HypCircle:
    """Hyperbolic circle: center in the open disk, hyperbolic radius > 0."""

    center: complex
    radius: float


def hyp_circle_to_euclidean(circle: HypCircle) -> tuple[complex, float]:
    """Euclidean (center, radius) of a hyperbolic circle.

    A hyperbolic circle is a Euclidean circle; the Euclidean center is
    pulled toward the disk boundary, so it is found from the diameter
    endpoints along the ray through the hyperbolic center.
    """
    c, r = circle.center, circle.radius
    rho = abs(c)
    if rho == 0.0:
        return 0j, math.tanh(r / 2.0)
    d = 2.0 * math.atanh(rho)
    u = c / rho
    near = math.tanh((d - r) / 2.0)
    far = math.tanh((d + r) / 2.0)
    return 0.5 * (near + far) * u, 0.5 * (far - near)


@dataclass(frozen=True)
class DiskAutomorphism:
    """Orientation-preserving disk automorphism z -> e^{i phi} (z - a)/(1 - conj(a) z)."""

    a: complex = 0j
    phi: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.a) >= 1.0:
            raise ValueError("automorphism parameter a must lie in the open disk")

    def apply(self, z: complex) -> complex:
        return cmath.exp(1j * self.phi) * (z - self.a) / (1.0 - self.a.conjugate() * z)

    def __call__(self, z: complex) -> complex:
        return self.apply(z)

    def derivative(self, z: complex) -> complex:
        den = 1.0 - self.a.conjugate() * z
        return cmath.exp(1j * self.phi) * (1.0 - abs(self.a) ** 2) / (den * den)

    def compose(self, other: "DiskAutomorphism") -> "DiskAutomorphism":
        """self after other: (self.compose(other))(z) == self(other(z))."""
        e2 = cmath.exp(1j * other.phi)
        num = self.a + e2 * other.a
        den = e2 + self.a * other.a.conjugate()
        a = num / den
        phi = self.phi + cmath.phase(den) - cmath.phase(
            1.0 + self.a.conjugate() * other.a * e2
        )
        return DiskAutomorphism(_renorm_a(a), _renorm_phi(phi))

    def invert(self) -> "DiskAutomorphism":
        a = -self.a * cmath.exp(1j * self.phi)
        return DiskAutomorphism(_renorm_a(a), _renorm_phi(-self.phi))


def _renorm_a(a: complex) -> complex:
    # composition roundoff can push |a| to 1 - eps; only genuine escapes fail
    m = abs(a)
    if m >= 1.0:
        if m > 1.0 + 1e-9:
            raise ValueError("composed automorphism left the disk")
        a = a / m * (1.0 - 1e-15)
    return a


def _renorm_phi(phi: float) -> float:
    return math.remainder(phi, 2.0 * math.pi)


def identity() -> DiskAutomorphism:
    return DiskAutomorphism(0j, 0.0)


def rotation(phi: float) -> DiskAutomorphism:
    return DiskAutomorphism(0j, _renorm_phi(phi))


def translation_to_origin(p: complex) -> DiskAutomorphism:
    """The automorphism sending p to the origin with no extra rotation."""
    return DiskAutomorphism(p, 0.0)


def align(p1: complex, p2: complex, w1: complex, w2: complex) -> DiskAutomorphism:
    """The automorphism sending p1 to w1 and the ray p1->p2 to the ray w1->w2.

    When hyp_distance(p1, p2) == hyp_distance(w1, w2) it maps p2 to w2.
    """
    s = translation_to_origin(p1)
    t = translation_to_origin(w1)
    psi = cmath.phase(t.apply(w2)) - cmath.phase(s.apply(p2))
    return t.invert().compose(rotation(psi).compose(s))


def schwarz_quotient(m: DiskAutomorphism, z: complex) -> float:
    """|m'(z)| (1 - |z|^2) / (1 - |m(z)|^2); identically 1 on automorphisms."""
    w = m.apply(z)
    return abs(m.derivative(z)) * (1.0 - abs(z) ** 2) / (1.0 - abs(w) ** 2)
