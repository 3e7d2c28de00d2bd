"""Combinatorial surface layer: validation, star closures, existence checks."""

import math
import random

import pytest

from circlepat.surface import (
    CellularSurface,
    NotATriangulation,
    WeightOutOfRange,
    check_ideal,
    check_origin_in_Y,
    check_thurston,
    connected_vertex_subsets,
    link_pairs,
    star_closure,
)
from subset_oracle import brute_force_check, same_violations

SPOKES = (8, 10, 12, 14)  # pocket instance: edges opposite midpoint vertex 1


def tetrahedron():
    edges = {0: (0, 1), 1: (0, 2), 2: (0, 3), 3: (1, 2), 4: (1, 3), 5: (2, 3)}
    faces = {
        0: [(0, 1), (3, 1), (1, -1)],
        1: [(1, 1), (5, 1), (2, -1)],
        2: [(2, 1), (4, -1), (0, -1)],
        3: [(3, -1), (4, 1), (5, -1)],
    }
    return CellularSurface([0, 1, 2, 3], edges, faces, name="tetrahedron")


def test_bundled_instances_validate(regular, quad, pocket, mixed):
    for surface, _ in (regular, quad, pocket, mixed):
        report = surface.validate()
        assert report.passed, report.summary()
        assert surface.euler_characteristic() == -2
        assert surface.genus() == 2


def test_validate_rejects_loop_edge():
    s = CellularSurface([0, 1], {0: (0, 0), 1: (0, 1)}, {})
    report = s.validate()
    assert not report.passed
    assert any(v.kind == "loop-edge" for v in report.violations)


def test_validate_rejects_dangling_edge_instance(regular):
    surface, _ = regular
    faces = {f: list(ds) for f, ds in surface.faces.items()}
    first = next(iter(faces))
    faces[first] = faces[first][:2] + [faces[first][2], faces[first][2]]
    s = CellularSurface(surface.vertices, surface.edges, faces)
    report = s.validate()
    assert not report.passed
    assert any(v.kind == "edge-instance-balance" for v in report.violations)


def test_validate_rejects_wrong_euler_characteristic():
    report = tetrahedron().validate()
    assert not report.passed
    assert any(v.kind == "euler-characteristic" for v in report.violations)


def test_relabel_preserves_structure(regular):
    surface, weights = regular
    vmap = {v: v + 100 for v in surface.vertices}
    emap = {e: 3 * e + 7 for e in surface.edges}
    fmap = {f: f + 50 for f in surface.faces}
    out = surface.relabel(vmap, emap, fmap)
    assert out.validate().passed
    assert out.euler_characteristic() == surface.euler_characteristic()
    moved = {emap[e]: t for e, t in weights.items()}
    assert check_origin_in_Y(out, moved).passed == check_origin_in_Y(surface, weights).passed


def test_star_closure_single_vertex(regular):
    surface, _ = regular
    for v in surface.vertices:
        sc = star_closure(surface, {v})
        assert sc.components == 1
        assert sc.chi == 1
        assert len(sc.edges) == surface.vertex_degree(v)


def test_star_closure_of_everything(regular):
    surface, _ = regular
    sc = star_closure(surface, set(surface.vertices))
    assert sc.chi == -2
    assert sc.components == 1
    assert sc.faces == frozenset(surface.faces)


def test_link_pairs_require_triangulation(quad):
    surface, _ = quad
    with pytest.raises(NotATriangulation):
        link_pairs(surface, {0})


def test_subset_family_matches_brute_force(regular, pocket):
    """The enumerated family must be exactly the connected-closure subsets."""
    for surface, _ in (regular, pocket):
        fam = {frozenset(v0) for v0 in connected_vertex_subsets(surface, 12)}
        _, examined = brute_force_check(surface, {e: 0.0 for e in surface.edges})
        assert len(fam) == examined


@pytest.mark.parametrize("which", ["regular", "pocket"])
def test_check_matches_brute_force_random_weights(which, request):
    surface, _ = request.getfixturevalue(which)
    rng = random.Random(31)
    for _ in range(20):
        w = {e: rng.uniform(0.0, 0.33 * math.pi) for e in surface.edges}
        report = check_origin_in_Y(surface, w)
        brute, _ = brute_force_check(surface, w)
        assert same_violations(report, brute)
        assert not report.partial


def test_check_matches_brute_force_on_sphere():
    # chi = 2 forces a violation on the full vertex set
    s = tetrahedron()
    w = {e: 0.0 for e in s.edges}
    report = check_origin_in_Y(s, w)
    brute, _ = brute_force_check(s, w)
    assert same_violations(report, brute)
    assert not report.passed
    assert any(v.witness == "{0,1,2,3}" for v in report.violations)


def test_pocket_degeneration_weights(pocket):
    surface, _ = pocket
    w = {e: (math.pi - 0.01 if e in SPOKES else 0.0) for e in surface.edges}
    report = check_origin_in_Y(surface, w)
    assert not report.passed
    brute, _ = brute_force_check(surface, w)
    assert same_violations(report, brute)
    witnesses = {v.witness for v in report.violations}
    assert "{1}" in witnesses
    by_name = {v.witness: v.lhs for v in report.violations}
    assert by_name["{1}"] == pytest.approx(2 * math.pi - 0.04, abs=1e-12)


def test_zero_weights_pass(regular, pocket):
    for surface, _ in (regular, pocket):
        report = check_origin_in_Y(surface, {e: 0.0 for e in surface.edges})
        assert report.passed
        assert report.stats["subsets_checked"] > 0


def test_partial_flag_with_small_bound(regular):
    surface, _ = regular
    w = {e: 0.0 for e in surface.edges}
    report = check_origin_in_Y(surface, w, subset_bound=2)
    assert report.partial
    assert "partial" in report.summary()


def test_check_requires_weights_in_range(regular):
    surface, _ = regular
    w = {e: 0.0 for e in surface.edges}
    w[0] = math.pi
    with pytest.raises(WeightOutOfRange):
        check_origin_in_Y(surface, w)
    with pytest.raises(WeightOutOfRange):
        check_origin_in_Y(surface, {})


def test_check_requires_triangulation(quad):
    surface, weights = quad
    with pytest.raises(NotATriangulation):
        check_origin_in_Y(surface, weights)


def test_thurston_check(regular, quad):
    surface, _ = regular
    assert check_thurston(surface, {e: 0.0 for e in surface.edges}).passed
    report = check_thurston(surface, {e: math.pi / 2 for e in surface.edges})
    kinds = {v.kind for v in report.violations}
    assert "three-edge-path" in kinds
    with pytest.raises(WeightOutOfRange):
        check_thurston(surface, {e: 2.0 for e in surface.edges})
    with pytest.raises(NotATriangulation):
        check_thurston(quad[0], quad[1])


def test_ideal_check_on_quad_instance(quad):
    surface, weights = quad
    assert check_ideal(surface, weights).passed
    bumped = dict(weights)
    bumped[0] = weights[0] * 0.9
    report = check_ideal(surface, bumped)
    assert not report.passed
    assert any(v.kind == "ideal-face-sum" for v in report.violations)


def test_ideal_check_rejects_zero_weights(regular):
    surface, _ = regular
    with pytest.raises(WeightOutOfRange):
        check_ideal(surface, {e: 0.0 for e in surface.edges})
