"""Cookie-cutter deformation: packings, gluing, restricted solutions."""

import dataclasses
import math

import pytest

from circlepat.deform import (
    CookiePacking,
    GluingNotTriangular,
    PlanarRegion,
    RegionTooSmall,
    build_glued,
    cookie_cutter,
    deform_solve,
    glue,
    refinement_experiment,
    region_from_points,
)
from circlepat.files import bundled_path, parse_region
from circlepat.solver import solve

SQRT3_2 = math.sqrt(3.0) / 2.0


@pytest.fixture(scope="module")
def square_region():
    face, corners = parse_region(bundled_path("square.region").read_text())
    return face, region_from_points(corners)


def scan_kept_disks(corners, n):
    """Independent lattice scan: shoelace centroid, crossing-rule inside
    test, plain segment distances."""
    pts = [complex(*c) if isinstance(c, tuple) else c for c in corners]
    m = len(pts)
    area2 = sum(
        pts[i].real * pts[(i + 1) % m].imag - pts[(i + 1) % m].real * pts[i].imag
        for i in range(m)
    )
    cx = sum(
        (pts[i].real + pts[(i + 1) % m].real)
        * (pts[i].real * pts[(i + 1) % m].imag - pts[(i + 1) % m].real * pts[i].imag)
        for i in range(m)
    ) / (3.0 * area2)
    cy = sum(
        (pts[i].imag + pts[(i + 1) % m].imag)
        * (pts[i].real * pts[(i + 1) % m].imag - pts[(i + 1) % m].real * pts[i].imag)
        for i in range(m)
    ) / (3.0 * area2)

    def inside(z):
        hits = 0
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % m]
            if (a.imag > z.imag) != (b.imag > z.imag):
                x = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
                if x > z.real:
                    hits += 1
        return hits % 2 == 1

    def seg_dist(z, a, b):
        t = ((z - a).real * (b - a).real + (z - a).imag * (b - a).imag) / abs(b - a) ** 2
        t = min(1.0, max(0.0, t))
        return abs(z - (a + t * (b - a)))

    def poly_dist(z):
        if inside(z):
            return 0.0
        return min(seg_dist(z, pts[i], pts[(i + 1) % m]) for i in range(m))

    spacing = 2.0 / n
    span = int(math.ceil(max(abs(p - complex(cx, cy)) for p in pts) / spacing)) + 3
    kept = {}
    for j in range(-2 * span, 2 * span + 1):
        for i in range(-2 * span, 2 * span + 1):
            z = complex(cx + spacing * (i + j / 2.0), cy + spacing * SQRT3_2 * j)
            if poly_dist(z) <= 1.0 / n:
                kept[(i, j)] = z
    return kept


@pytest.mark.parametrize("n", [3, 4, 8])
def test_kept_disks_match_lattice_scan(square_region, n):
    _, region = square_region
    packing = cookie_cutter(region, n)
    kept = scan_kept_disks(region.corners, n)
    assert set(packing.centers) == set(kept)
    for k, z in packing.centers.items():
        assert z == pytest.approx(kept[k], abs=1e-12)


def test_square_packing_structure(square_region):
    _, region = square_region
    packing = cookie_cutter(region, 4)
    assert len(packing.centers) == 27
    assert len(packing.triangles) == 36
    assert len(packing.interior) == 11
    assert set(packing.boundary) | set(packing.interior) == set(packing.centers)
    assert not set(packing.boundary) & set(packing.interior)
    spacing = 2.0 / 4
    # the boundary walk moves between tangent disks
    for a, b in zip(packing.boundary, packing.boundary[1:] + packing.boundary[:1]):
        assert abs(packing.centers[a] - packing.centers[b]) == pytest.approx(
            spacing, abs=1e-12
        )
    # triangles are counterclockwise tangency triples
    for t in packing.triangles:
        za, zb, zc = (packing.centers[k] for k in t)
        cross = ((zb - za).real * (zc - za).imag - (zb - za).imag * (zc - za).real)
        assert cross > 0
        for p, q in ((za, zb), (zb, zc), (zc, za)):
            assert abs(p - q) == pytest.approx(spacing, abs=1e-12)
    for t in packing.triangles:
        for s in range(3):
            pair = tuple(sorted((t[s], t[(s + 1) % 3])))
            assert pair in set(packing.contact_edges)


def test_square_side_assignment(square_region):
    _, region = square_region
    packing = cookie_cutter(region, 4)
    tags = [packing.sides[k] for k in packing.boundary]
    corners = [t for t in tags if len(t) == 2]
    assert len(corners) == 4
    assert sorted(corners) == [(0, 1), (1, 2), (2, 3), (3, 0)]
    # walking the cycle, the side labels climb one step at a time
    firsts = [t[0] for t in tags]
    changes = [
        (a, b) for a, b in zip(firsts, firsts[1:] + firsts[:1]) if a != b
    ]
    assert len(changes) == 4
    assert all((b - a) % 4 == 1 for a, b in changes)


def test_cookie_cutter_rejects_bad_n(square_region):
    _, region = square_region
    with pytest.raises(ValueError, match="n must be"):
        cookie_cutter(region, 1)
    with pytest.raises(ValueError, match="n must be"):
        cookie_cutter(region, 65)


def test_cookie_cutter_too_coarse(square_region):
    _, region = square_region
    with pytest.raises(RegionTooSmall, match="interior"):
        cookie_cutter(region, 2)


def test_region_validation():
    with pytest.raises(ValueError, match="3 corners"):
        PlanarRegion((0j, 1 + 0j))
    with pytest.raises(ValueError, match="counterclockwise"):
        region_from_points([(0, 0), (0, 1), (1, 0)])
    with pytest.raises(ValueError, match="simple"):
        # positive signed area, but two sides cross
        region_from_points([(0, 0), (4, 0), (1, 2), (3, 2)])


def test_glue_preserves_surface_invariants(mixed, square_region):
    surface, weights = mixed
    face, region = square_region
    packing = cookie_cutter(region, 4)
    glued = glue(surface, face, packing, weights)
    assert glued.surface.validate().passed
    assert glued.surface.euler_characteristic() == -2
    assert glued.surface.is_triangulation()
    # every new edge is a tangency, every old edge keeps its weight
    for e in glued.new_edges:
        assert glued.weights[e] == 0.0
    for e in surface.edges:
        assert glued.weights[e] == weights[e]
    # one new vertex per kept disk, tracked back to its lattice point
    assert len(glued.provenance) == len(packing.centers)
    assert set(glued.provenance) == set(glued.surface.vertices) - set(surface.vertices)
    for v, (f, key) in glued.provenance.items():
        assert f == face
        assert key in packing.centers
    # corner disks recorded for every original edge transition
    assert sorted(glued.corner_faces) == [(face, i) for i in range(region.size)]


def test_glue_rejects_missing_corner_disks(mixed, square_region):
    surface, weights = mixed
    face, region = square_region
    packing = cookie_cutter(region, 4)
    flat = dataclasses.replace(
        packing, sides={k: (0,) for k in packing.sides}
    )
    with pytest.raises(GluingNotTriangular, match="no corner disk"):
        glue(surface, face, flat, weights)


def test_build_glued_checks_side_count(regular, square_region):
    surface, weights = regular
    _, region = square_region
    first_face = min(surface.faces)
    with pytest.raises(ValueError, match="sides"):
        build_glued(surface, weights, {first_face: region}, 4)


def test_deform_solve_restriction(mixed, square_region):
    surface, weights = mixed
    face, region = square_region
    full, restricted = deform_solve(surface, weights, {face: region}, n=4)
    assert full.residual <= 1e-10
    assert set(restricted.radii) == set(surface.vertices)
    for v in surface.vertices:
        assert restricted.radii[v] == full.radii[v]


def test_triangle_region_reproduces_direct_solution(regular):
    """Gluing into a triangle face subdivides it without changing the
    admissible pattern, so the restricted radii must match a direct solve."""
    surface, _ = regular
    weights = {e: 0.0 for e in surface.edges}
    region = PlanarRegion((0j, 4 + 0j, 2 + 3.4j))
    face = min(surface.faces)
    direct = solve(surface, weights)
    _, restricted = deform_solve(surface, weights, {face: region}, n=4)
    for v in surface.vertices:
        assert restricted.radii[v] == pytest.approx(direct.radii[v], abs=1e-9)


def test_refinement_report_structure(mixed, square_region):
    surface, weights = mixed
    face, region = square_region
    report = refinement_experiment(surface, weights, {face: region}, [3, 4])
    assert [row.n for row in report.rows] == [3, 4]
    assert len(report.radius_diffs) == 1
    assert report.radius_diffs[0] > 0.0
    table = report.table()
    assert "min_radius" in table and "residual" in table
