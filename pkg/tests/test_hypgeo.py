"""Disk-model primitives checked against independent constructions."""

import cmath
import math
import random

import pytest
from scipy.integrate import quad

from circlepat.hypgeo import (
    DiskAutomorphism,
    HypCircle,
    align,
    clamped_acos,
    hyp_circle_to_euclidean,
    hyp_distance,
    identity,
    rotation,
    schwarz_quotient,
    triangle_angle,
)

DIST_TOL = 1e-10
MAP_TOL = 1e-12


def mobius_to_origin(p, z):
    # independent of DiskAutomorphism on purpose
    return (z - p) / (1.0 - p.conjugate() * z)


def integrated_distance(p, q):
    """Length of the geodesic from p to q, by quadrature.

    After moving p to the origin the geodesic is a Euclidean ray, so the
    hyperbolic length is the integral of 2/(1-r^2) along it.
    """
    w = mobius_to_origin(p, q)
    # the integrand is near-singular for far pairs; quad's own error
    # estimate is conservative there, the values are good to ~1e-14
    val, err = quad(lambda r: 2.0 / (1.0 - r * r), 0.0, abs(w), epsabs=1e-13)
    assert err < 1e-6
    return val


def point_at_distance(center, direction, r):
    """Point at hyperbolic distance r from center, by bisection along a
    Euclidean ray.  Uses only hyp_distance."""
    unit = cmath.exp(1j * direction)
    # parameter where the ray exits the unit disk
    b = (center * unit.conjugate()).real
    exit_t = -b + math.sqrt(b * b + 1.0 - abs(center) ** 2)
    lo, hi = 0.0, exit_t * (1.0 - 1e-12)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hyp_distance(center, center + mid * unit) < r:
            lo = mid
        else:
            hi = mid
    return center + 0.5 * (lo + hi) * unit


def test_distance_matches_geodesic_integral():
    rng = random.Random(3)
    for _ in range(50):
        p = cmath.rect(rng.uniform(0, 0.95), rng.uniform(0, 2 * math.pi))
        q = cmath.rect(rng.uniform(0, 0.95), rng.uniform(0, 2 * math.pi))
        assert hyp_distance(p, q) == pytest.approx(
            integrated_distance(p, q), abs=DIST_TOL
        )


def test_distance_frozen_value():
    # 2 atanh(1/2) = log 3
    assert hyp_distance(0j, 0.5 + 0j) == pytest.approx(math.log(3.0), abs=1e-15)


def test_distance_symmetry_and_identity():
    rng = random.Random(4)
    for _ in range(100):
        p = cmath.rect(rng.uniform(0, 0.99), rng.uniform(0, 2 * math.pi))
        q = cmath.rect(rng.uniform(0, 0.99), rng.uniform(0, 2 * math.pi))
        assert hyp_distance(p, q) == hyp_distance(q, p)
        assert hyp_distance(p, p) == 0.0


def test_triangle_inequality_sampled():
    rng = random.Random(5)
    for _ in range(200):
        pts = [
            cmath.rect(rng.uniform(0, 0.9), rng.uniform(0, 2 * math.pi))
            for _ in range(3)
        ]
        a = hyp_distance(pts[0], pts[1])
        b = hyp_distance(pts[1], pts[2])
        c = hyp_distance(pts[0], pts[2])
        assert c <= a + b + 1e-12


def test_triangle_angle_right_angle_pythagoras():
    # cosh c = cosh a cosh b characterizes the right angle
    rng = random.Random(6)
    for _ in range(50):
        a = rng.uniform(0.1, 3.0)
        b = rng.uniform(0.1, 3.0)
        c = math.acosh(math.cosh(a) * math.cosh(b))
        assert triangle_angle(c, a, b) == pytest.approx(math.pi / 2, abs=1e-12)


def test_triangle_angle_rejects_nonpositive_side():
    with pytest.raises(ValueError):
        triangle_angle(0.0, 1.0, 1.0)


def test_clamped_acos():
    assert clamped_acos(1.0 + 5e-13) == 0.0
    assert clamped_acos(-1.0 - 5e-13) == math.pi
    assert clamped_acos(0.5) == math.acos(0.5)
    with pytest.raises(ValueError):
        clamped_acos(1.0 + 1e-9)
    with pytest.raises(ValueError):
        clamped_acos(-1.0 - 1e-9)


def test_circle_conversion_against_sampled_points():
    """Points found on the hyperbolic circle by bisection must satisfy the
    Euclidean circle equation returned by the conversion."""
    rng = random.Random(7)
    for _ in range(20):
        c = cmath.rect(rng.uniform(0, 0.8), rng.uniform(0, 2 * math.pi))
        r = rng.uniform(0.05, 3.0)
        ec, er = hyp_circle_to_euclidean(HypCircle(c, r))
        for k in range(16):
            z = point_at_distance(c, 2 * math.pi * k / 16, r)
            assert abs(z - ec) == pytest.approx(er, abs=1e-10)


def test_circle_conversion_at_origin():
    ec, er = hyp_circle_to_euclidean(HypCircle(0j, 2.0))
    assert ec == 0j
    assert er == pytest.approx(math.tanh(1.0), abs=1e-15)


def test_automorphism_preserves_distance():
    rng = random.Random(8)
    for _ in range(100):
        m = DiskAutomorphism(
            cmath.rect(rng.uniform(0, 0.9), rng.uniform(0, 2 * math.pi)),
            rng.uniform(-math.pi, math.pi),
        )
        p = cmath.rect(rng.uniform(0, 0.95), rng.uniform(0, 2 * math.pi))
        q = cmath.rect(rng.uniform(0, 0.95), rng.uniform(0, 2 * math.pi))
        assert hyp_distance(m.apply(p), m.apply(q)) == pytest.approx(
            hyp_distance(p, q), abs=1e-9
        )


def test_compose_and_invert_pointwise():
    rng = random.Random(9)
    for _ in range(100):
        m1 = DiskAutomorphism(
            cmath.rect(rng.uniform(0, 0.9), rng.uniform(0, 2 * math.pi)),
            rng.uniform(-math.pi, math.pi),
        )
        m2 = DiskAutomorphism(
            cmath.rect(rng.uniform(0, 0.9), rng.uniform(0, 2 * math.pi)),
            rng.uniform(-math.pi, math.pi),
        )
        z = cmath.rect(rng.uniform(0, 0.95), rng.uniform(0, 2 * math.pi))
        assert m1.compose(m2).apply(z) == pytest.approx(
            m1.apply(m2.apply(z)), abs=MAP_TOL
        )
        assert m1.invert().apply(m1.apply(z)) == pytest.approx(z, abs=1e-11)


def test_identity_and_rotation():
    assert identity().apply(0.3 + 0.4j) == 0.3 + 0.4j
    assert rotation(math.pi / 2).apply(0.5 + 0j) == pytest.approx(0.5j, abs=1e-15)


def test_align_maps_both_points():
    """Pairs at equal hyperbolic distance are mapped onto each other."""
    rng = random.Random(10)
    for _ in range(40):
        d = rng.uniform(0.1, 2.5)
        p1 = cmath.rect(rng.uniform(0, 0.6), rng.uniform(0, 2 * math.pi))
        w1 = cmath.rect(rng.uniform(0, 0.6), rng.uniform(0, 2 * math.pi))
        p2 = point_at_distance(p1, rng.uniform(0, 2 * math.pi), d)
        w2 = point_at_distance(w1, rng.uniform(0, 2 * math.pi), d)
        m = align(p1, p2, w1, w2)
        assert m.apply(p1) == pytest.approx(w1, abs=1e-12)
        assert m.apply(p2) == pytest.approx(w2, abs=1e-9)


def test_schwarz_quotient_is_one():
    rng = random.Random(11)
    for _ in range(200):
        m = DiskAutomorphism(
            cmath.rect(rng.uniform(0, 0.9), rng.uniform(0, 2 * math.pi)),
            rng.uniform(-math.pi, math.pi),
        )
        z = cmath.rect(rng.uniform(0, 0.97), rng.uniform(0, 2 * math.pi))
        assert schwarz_quotient(m, z) == pytest.approx(1.0, abs=1e-10)
