"""Local circle configurations: two or three mutually intersecting circles.

Exterior intersection angles Theta are prescribed per circle pair; the
derived quantities are the center-triangle side lengths, the inner
angles at the centers, and their derivatives with respect to the
substituted radius coordinate u = log tanh(r/2), in which the angle
Jacobians are symmetric.
"""

from __future__ import annotations

import math

import numpy as np

from .hypgeo import triangle_angle

RADIUS_CAP = 40.0


class RangeError(ValueError):
    """Radius outside (0, RADIUS_CAP]."""


class InadmissibleWeights(ValueError):
    """Intersection angles violate the existence conditions."""


class TriangleInequalityViolation(ValueError):
    """Numerical triangle data failed to close beyond tolerance."""


def _check_radius(r: float) -> None:
    if not (0.0 < r <= RADIUS_CAP):
        raise RangeError(f"radius {r!r} outside (0, {RADIUS_CAP}]")


_LOG2 = math.log(2.0)


def u_from_r(r: float) -> float:
    """u = log tanh(r/2), monotone (0, inf) -> (-inf, 0)."""
    _check_radius(r)
    # pick the formulation whose log argument is far from 1
    if r > _LOG2:
        head = math.log1p(-math.exp(-r))
    else:
        head = math.log(-math.expm1(-r))
    return head - math.log1p(math.exp(-r))


def r_from_u(u: float) -> float:
    """Inverse of u_from_r."""
    if u >= 0.0:
        raise RangeError(f"u coordinate {u!r} must be negative")
    if u < -_LOG2:
        tail = math.log1p(-math.exp(u))
    else:
        tail = math.log(-math.expm1(u))
    return math.log1p(math.exp(u)) - tail


def edge_length(r1: float, r2: float, theta: float) -> float:
    """Distance between the centers of two circles with radii r1, r2
    meeting at exterior angle theta; theta = 0 is exterior tangency."""
    _check_radius(r1)
    _check_radius(r2)
    if not (0.0 <= theta < math.pi):
        raise InadmissibleWeights(f"intersection angle {theta!r} outside [0, pi)")
    c = math.cosh(r1) * math.cosh(r2) + math.cos(theta) * math.sinh(r1) * math.sinh(r2)
    return math.acosh(c)


def three_circle_admissible(thetas: tuple[float, float, float]) -> bool:
    return all(0.0 <= t < math.pi for t in thetas) and sum(thetas) < math.pi


def three_circle_angles(
    radii: tuple[float, float, float], thetas: tuple[float, float, float]
) -> tuple[float, float, float]:
    """Inner angles of the center triangle of three mutually intersecting
    circles.

    thetas[k] is the angle on the edge joining the other two circles
    (opposite labeling).  Returns the angle at each center.
    """
    if not three_circle_admissible(thetas):
        raise InadmissibleWeights(f"weights {thetas!r} not admissible")
    sides = _triangle_sides(radii, thetas)
    for k in range(3):
        if sides[k] >= sides[(k + 1) % 3] + sides[(k + 2) % 3] + 1e-9:
            raise TriangleInequalityViolation(
                f"sides {sides!r} violate the triangle inequality"
            )
    return tuple(
        triangle_angle(sides[k], sides[(k + 1) % 3], sides[(k + 2) % 3])
        for k in range(3)
    )


def _triangle_sides(radii, thetas):
    # side k is opposite circle k
    return tuple(
        edge_length(radii[(k + 1) % 3], radii[(k + 2) % 3], thetas[k])
        for k in range(3)
    )


def _angle_side_partials(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Partials of the angle opposite side a with respect to (a, b, c)."""
    sa, sb, sc = math.sinh(a), math.sinh(b), math.sinh(c)
    ca, cb, cc = math.cosh(a), math.cosh(b), math.cosh(c)
    cosA = (cb * cc - ca) / (sb * sc)
    sinA = math.sqrt(max(1.0 - cosA * cosA, 1e-300))
    da = sa / (sinA * sb * sc)
    db = -(ca * cb - cc) / (sinA * sb * sb * sc)
    dc = -(ca * cc - cb) / (sinA * sc * sc * sb)
    return da, db, dc


def _edge_length_partials(r1: float, r2: float, theta: float, ell: float) -> tuple[float, float]:
    s = math.sinh(ell)
    d1 = (math.sinh(r1) * math.cosh(r2) + math.cos(theta) * math.cosh(r1) * math.sinh(r2)) / s
    d2 = (math.cosh(r1) * math.sinh(r2) + math.cos(theta) * math.sinh(r1) * math.cosh(r2)) / s
    return d1, d2


def angle_gradient_u(
    radii: tuple[float, float, float], thetas: tuple[float, float, float]
) -> np.ndarray:
    """3x3 matrix of d(angle at center a) / d(u of center b).

    Symmetric, negative on the diagonal, positive off it, with negative
    row sums.
    """
    if not three_circle_admissible(thetas):
        raise InadmissibleWeights(f"weights {thetas!r} not admissible")
    sides = _triangle_sides(radii, thetas)
    # d side_k / d r_t, zero when t == k
    dside = np.zeros((3, 3))
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        di, dj = _edge_length_partials(radii[i], radii[j], thetas[k], sides[k])
        dside[k, i] = di
        dside[k, j] = dj
    grad_r = np.zeros((3, 3))
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        pa, pb, pc = _angle_side_partials(sides[a], sides[b], sides[c])
        for t in range(3):
            grad_r[a, t] = pa * dside[a, t] + pb * dside[b, t] + pc * dside[c, t]
    return grad_r * np.array([math.sinh(r) for r in radii])[None, :]


def two_circle_angles(r1: float, r2: float, theta: float) -> tuple[float, float]:
    """Angles at the two centers between the center segment and the
    segments to one intersection point of the circles.

    Requires theta strictly inside (0, pi): tangent circles have no
    intersection point.
    """
    if not (0.0 < theta < math.pi):
        raise InadmissibleWeights(
            f"two-circle configurations need theta in (0, pi), got {theta!r}"
        )
    d = edge_length(r1, r2, theta)
    th1 = triangle_angle(r2, d, r1)
    th2 = triangle_angle(r1, d, r2)
    return th1, th2


def two_circle_gradient_u(r1: float, r2: float, theta: float) -> np.ndarray:
    """2x2 matrix of d(angle at center a) / d(u of center b); symmetric,
    negative diagonal, positive off-diagonal, negative row sums."""
    if not (0.0 < theta < math.pi):
        raise InadmissibleWeights(
            f"two-circle configurations need theta in (0, pi), got {theta!r}"
        )
    d = edge_length(r1, r2, theta)
    dd1, dd2 = _edge_length_partials(r1, r2, theta, d)
    # angle at center 1: opposite side r2, adjacent sides d and r1
    pa, pb, pc = _angle_side_partials(r2, d, r1)
    g = np.zeros((2, 2))
    g[0, 0] = pc + pb * dd1
    g[0, 1] = pa + pb * dd2
    # angle at center 2 by exchanging the roles
    qa, qb, qc = _angle_side_partials(r1, d, r2)
    g[1, 1] = qc + qb * dd2
    g[1, 0] = qa + qb * dd1
    return g * np.array([math.sinh(r1), math.sinh(r2)])[None, :]
