"""Develop a solved pattern into the Poincare disk and verify it.

Faces are laid out once each over a breadth-first spanning tree of the
dual graph; non-tree edges supply holonomy checks.  All verification
works on the placed Euclidean circle data, where intersection angles
are literal angles (the disk model is conformal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .configurations import edge_length, three_circle_angles
from .hypgeo import (
    DiskAutomorphism,
    HypCircle,
    align,
    hyp_circle_to_euclidean,
    hyp_distance,
)
from .solver import PatternSolution
from .surface import CellularSurface, ConditionReport, Violation, twin

MERGE_TOL = 1e-9
RESIDUAL_GATE = 1e-8


class ResidualTooLarge(RuntimeError):
    pass


@dataclass
class DiskLayout:
    surface: CellularSurface
    mode: str
    radii: dict[int, float]
    circles: dict[tuple[int, int], HypCircle]
    face_corners: dict[int, list[complex]]
    face_copy: dict[tuple[int, int], tuple[int, int]]
    face_points: dict[int, complex]
    tree_edges: frozenset[int]
    holonomy_residual: float
    edge_defect: float

    def transformed(self, g: DiskAutomorphism) -> "DiskLayout":
        """Same layout in different disk coordinates."""
        return DiskLayout(
            surface=self.surface,
            mode=self.mode,
            radii=self.radii,
            circles={k: HypCircle(g(c.center), c.radius) for k, c in self.circles.items()},
            face_corners={f: [g(z) for z in zs] for f, zs in self.face_corners.items()},
            face_copy=self.face_copy,
            face_points={f: g(z) for f, z in self.face_points.items()},
            tree_edges=self.tree_edges,
            holonomy_residual=self.holonomy_residual,
            edge_defect=self.edge_defect,
        )


# -- canonical face shapes -------------------------------------------------


def _polar(dist: float, angle: float) -> complex:
    return math.tanh(dist / 2.0) * complex(math.cos(angle), math.sin(angle))


def _triangle_shape(surface: CellularSurface, weights: dict[int, float],
                    radii: dict[int, float], f: int) -> list[complex]:
    """Counterclockwise placement of the three centers: first at the
    origin, second on the positive x-axis."""
    darts = surface.faces[f]
    corners = [surface.tail(d) for d in darts]
    rr = [radii[v] for v in corners]
    tt = [weights[darts[(k + 1) % 3][0]] for k in range(3)]
    # side k joins the two corners other than k
    sides = [
        edge_length(rr[(k + 1) % 3], rr[(k + 2) % 3], tt[k]) for k in range(3)
    ]
    angles = three_circle_angles(tuple(rr), tuple(tt))
    return [0j, _polar(sides[2], 0.0), _polar(sides[1], angles[0])]


def _ideal_shape(surface: CellularSurface, weights: dict[int, float],
                 radii: dict[int, float], f: int) -> tuple[list[complex], complex]:
    """Fan around the face's common point at the origin: center i sits at
    distance r_i, and consecutive directions differ by pi - theta(e).
    The angle sums close exactly by the per-face weight-sum condition."""
    darts = surface.faces[f]
    centers = []
    phi = 0.0
    for d in darts:
        centers.append(_polar(radii[surface.tail(d)], phi))
        phi += math.pi - weights[d[0]]
    return centers, 0j


def _face_shape(surface, weights, radii, f, mode) -> tuple[list[complex], complex | None]:
    if mode == "triangulated":
        return _triangle_shape(surface, weights, radii, f), None
    return _ideal_shape(surface, weights, radii, f)


# -- developing map ---------------------------------------------------------


def develop(surface: CellularSurface, weights: dict[int, float],
            solution: PatternSolution) -> DiskLayout:
    """Place every face once, gluing along a breadth-first dual spanning
    tree; the first face lands with its first center at the origin and
    its first edge along the positive x-axis."""
    if solution.residual > RESIDUAL_GATE:
        raise ResidualTooLarge(
            f"solution residual {solution.residual:.3e} exceeds {RESIDUAL_GATE:.0e}"
        )
    mode = solution.mode
    radii = solution.radii
    placed: dict[int, list[complex]] = {}
    face_points: dict[int, complex] = {}
    tree: set[int] = set()

    f0 = min(surface.faces)
    shape, pt = _face_shape(surface, weights, radii, f0, mode)
    g = align(shape[0], shape[1], 0j, _polar(hyp_distance(shape[0], shape[1]), 0.0))
    placed[f0] = [g(z) for z in shape]
    if pt is not None:
        face_points[f0] = g(pt)

    queue = [f0]
    while queue:
        f = queue.pop(0)
        darts = surface.faces[f]
        for i, d in enumerate(darts):
            nb = surface.face_of(twin(d))
            if nb in placed:
                continue
            nshape, npt = _face_shape(surface, weights, radii, nb, mode)
            j = surface.faces[nb].index(twin(d))
            m = len(nshape)
            # the shared edge runs i -> i+1 here and j+1 -> j there
            p_a = placed[f][i]
            p_b = placed[f][(i + 1) % len(placed[f])]
            q_a = nshape[(j + 1) % m]
            q_b = nshape[j]
            iso = align(q_a, q_b, p_a, p_b)
            placed[nb] = [iso(z) for z in nshape]
            if npt is not None:
                face_points[nb] = iso(npt)
            tree.add(d[0])
            queue.append(nb)

    # merge corner placements into circle copies
    copies: dict[int, list[complex]] = {v: [] for v in surface.vertices}
    face_copy: dict[tuple[int, int], tuple[int, int]] = {}
    for f in sorted(placed):
        darts = surface.faces[f]
        for i, d in enumerate(darts):
            v = surface.tail(d)
            z = placed[f][i]
            for ci, existing in enumerate(copies[v]):
                if abs(z - existing) < MERGE_TOL:
                    face_copy[(f, i)] = (v, ci)
                    break
            else:
                copies[v].append(z)
                face_copy[(f, i)] = (v, len(copies[v]) - 1)
    circles = {
        (v, ci): HypCircle(z, radii[v])
        for v in surface.vertices
        for ci, z in enumerate(copies[v])
    }

    defect = 0.0
    for f in sorted(placed):
        darts = surface.faces[f]
        n = len(darts)
        for i, d in enumerate(darts):
            want = edge_length(radii[surface.tail(d)], radii[surface.head(d)],
                               weights[d[0]])
            got = hyp_distance(placed[f][i], placed[f][(i + 1) % n])
            defect = max(defect, abs(got - want))

    holonomy = _holonomy_residual(surface, placed)
    return DiskLayout(
        surface=surface,
        mode=mode,
        radii=radii,
        circles=circles,
        face_corners=placed,
        face_copy=face_copy,
        face_points=face_points,
        tree_edges=frozenset(tree),
        holonomy_residual=holonomy,
        edge_defect=defect,
    )


def _edge_positions(surface, placed, d) -> tuple[complex, complex]:
    """Placed tail and head centers of a dart, in its own face's copy."""
    f = surface.face_of(d)
    i = surface.faces[f].index(d)
    n = len(surface.faces[f])
    return placed[f][i], placed[f][(i + 1) % n]


def _holonomy_residual(surface: CellularSurface, placed: dict[int, list[complex]]) -> float:
    """Compose the edge-matching isometries around each vertex star and
    measure how far they fail to return, at a neighboring center (so a
    residual rotation is not silently fixed)."""
    worst = 0.0
    for v in surface.vertices:
        d0 = next(
            d for f in sorted(surface.faces) for d in surface.faces[f]
            if surface.tail(d) == v
        )
        frame = DiskAutomorphism()
        d = d0
        for _ in range(surface.vertex_degree(v)):
            a, b = _edge_positions(surface, placed, d)
            a2, b2 = _edge_positions(surface, placed, twin(d))
            # twin runs head -> tail on the neighboring face
            step = align(b2, a2, a, b)
            frame = frame.compose(step)
            d = surface.rotation_successor(d)
        assert d == d0
        _, b0 = _edge_positions(surface, placed, d0)
        worst = max(worst, hyp_distance(frame(b0), b0))
    return worst


# -- verification -----------------------------------------------------------


def _euclid(c: HypCircle) -> tuple[complex, float]:
    return hyp_circle_to_euclidean(c)


def _placed_pairs(layout: DiskLayout):
    """One entry per face dart: edge id, the two circle copies, their
    placed centers in that face's coordinates."""
    s = layout.surface
    for f in sorted(s.faces):
        darts = s.faces[f]
        n = len(darts)
        for i, d in enumerate(darts):
            ka = layout.face_copy[(f, i)]
            kb = layout.face_copy[(f, (i + 1) % n)]
            yield f, d, ka, kb, layout.face_corners[f][i], layout.face_corners[f][(i + 1) % n]


def verify_intersection_angles(layout: DiskLayout, weights: dict[int, float],
                               tol: float = 1e-8) -> ConditionReport:
    """Every placed adjacent circle pair must meet at its prescribed
    angle; tangency (theta 0) is checked as a distance defect because the
    angle itself is ill-conditioned there."""
    bad = []
    max_angle = 0.0
    max_tangency = 0.0
    pairs = 0
    for f, d, ka, kb, za, zb in _placed_pairs(layout):
        theta = weights[d[0]]
        c1 = HypCircle(za, layout.radii[ka[0]])
        c2 = HypCircle(zb, layout.radii[kb[0]])
        pairs += 1
        if theta == 0.0:
            dev = abs(hyp_distance(za, zb) - (c1.radius + c2.radius))
            max_tangency = max(max_tangency, dev)
            if dev > tol:
                bad.append(Violation("tangency", f"face {f} edge {d[0]}", dev, tol))
        else:
            z1, s1 = _euclid(c1)
            z2, s2 = _euclid(c2)
            dd = abs(z1 - z2) ** 2
            cosv = (dd - s1 * s1 - s2 * s2) / (2.0 * s1 * s2)
            got = math.acos(min(1.0, max(-1.0, cosv)))
            dev = abs(got - theta)
            max_angle = max(max_angle, dev)
            if dev > tol:
                bad.append(Violation("intersection-angle", f"face {f} edge {d[0]}", dev, tol))
    return ConditionReport(
        passed=not bad,
        violations=bad,
        stats={
            "pairs_checked": pairs,
            "max_angle_deviation": max_angle,
            "max_tangency_defect": max_tangency,
        },
    )


def _lens_points(c1: tuple[complex, float], c2: tuple[complex, float],
                 samples: int = 32) -> list[complex] | None:
    """Boundary points of the intersection lens of two overlapping
    circles: both corners plus samples along both arcs.  None when the
    circles do not overlap (tangency included)."""
    z1, s1 = c1
    z2, s2 = c2
    d = abs(z2 - z1)
    if d >= s1 + s2 or d <= abs(s1 - s2):
        return None
    # intersection corners
    a = (s1 * s1 - s2 * s2 + d * d) / (2.0 * d)
    h2 = s1 * s1 - a * a
    if h2 <= 0.0:
        return None
    h = math.sqrt(h2)
    axis = (z2 - z1) / d
    mid = z1 + a * axis
    x1 = mid + h * axis * 1j
    x2 = mid - h * axis * 1j
    pts = [x1, x2]
    for (zc, sc, other, so) in ((z1, s1, z2, s2), (z2, s2, z1, s1)):
        a1 = math.atan2((x1 - zc).imag, (x1 - zc).real)
        a2 = math.atan2((x2 - zc).imag, (x2 - zc).real)
        span = (a2 - a1) % (2.0 * math.pi)
        midpt = zc + sc * complex(math.cos(a1 + span / 2.0), math.sin(a1 + span / 2.0))
        if abs(midpt - other) > so:  # wrong side: walk the other way
            a1, span = a2, 2.0 * math.pi - span
        for t in range(1, samples + 1):
            ang = a1 + span * t / (samples + 1)
            pts.append(zc + sc * complex(math.cos(ang), math.sin(ang)))
    return pts


def _collar_circles(layout: DiskLayout) -> list[tuple[complex, float]]:
    """Euclidean data of all placed circles plus the copies of each face
    re-placed across every non-tree edge (the immediate neighborhood of
    the fundamental domain)."""
    s = layout.surface
    out = [_euclid(c) for _, c in sorted(layout.circles.items())]
    instances: dict[int, list] = {}
    for f, d, ka, kb, za, zb in _placed_pairs(layout):
        instances.setdefault(d[0], []).append((d, f, za, zb))
    for e, inst in sorted(instances.items()):
        if e in layout.tree_edges or len(inst) != 2:
            continue
        (d1, f1, a1, b1), (d2, f2, a2, b2) = inst
        # dart d2 = twin(d1): runs head -> tail
        for (fa, pa, pb), (fb, qa, qb) in (
            ((f1, a1, b1), (f2, a2, b2)),
            ((f2, a2, b2), (f1, a1, b1)),
        ):
            iso = align(qb, qa, pa, pb)
            for i, z in enumerate(layout.face_corners[fb]):
                v = layout.face_copy[(fb, i)][0]
                out.append(_euclid(HypCircle(iso(z), layout.radii[v])))
    dedup: list[tuple[complex, float]] = []
    for z, r in out:
        if not any(abs(z - z2) < MERGE_TOL and abs(r - r2) < MERGE_TOL for z2, r2 in dedup):
            dedup.append((z, r))
    return dedup


def verify_primitive_contact(layout: DiskLayout, tol: float = 1e-9) -> ConditionReport:
    """No intersection lens of an adjacent pair may lie inside a third
    placed disk, else the pair's edge would not survive in the primitive
    contact graph.  Non-adjacent overlaps are recorded as information,
    not failures."""
    bad = []
    world = _collar_circles(layout)
    lenses = 0
    for f, d, ka, kb, za, zb in _placed_pairs(layout):
        c1 = _euclid(HypCircle(za, layout.radii[ka[0]]))
        c2 = _euclid(HypCircle(zb, layout.radii[kb[0]]))
        if abs(c1[0] - c2[0]) >= c1[1] + c2[1] - 1e-12:
            # tangent or separated: the lens is (at most) one point, which
            # no closed third disk may swallow without covering it
            pts = [c1[0] + (c2[0] - c1[0]) * c1[1] / (c1[1] + c2[1])]
        else:
            got = _lens_points(c1, c2)
            if got is None:
                continue
            pts = got
        lenses += 1
        for z3, s3 in world:
            if (abs(z3 - c1[0]) < MERGE_TOL and abs(s3 - c1[1]) < MERGE_TOL) or (
                abs(z3 - c2[0]) < MERGE_TOL and abs(s3 - c2[1]) < MERGE_TOL
            ):
                continue
            if all(abs(p - z3) <= s3 + tol for p in pts):
                bad.append(
                    Violation(
                        "lens-swallowed",
                        f"face {f} edge {d[0]} inside circle at {z3:.6f}",
                        0.0,
                        0.0,
                    )
                )
                break
    overlaps = []
    keys = sorted(layout.circles)
    adj = {frozenset(p) for p in layout.surface.edges.values()}
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            if k1[0] == k2[0] or frozenset((k1[0], k2[0])) in adj:
                continue
            ca, cb = layout.circles[k1], layout.circles[k2]
            if hyp_distance(ca.center, cb.center) < ca.radius + cb.radius - 1e-9:
                overlaps.append((k1, k2))
    return ConditionReport(
        passed=not bad,
        violations=bad,
        stats={"lenses_checked": lenses, "nonadjacent_overlaps": overlaps},
    )


def verify_ideal_incidence(layout: DiskLayout, tol: float = 1e-6) -> ConditionReport:
    """All circles of a face must run through one common point.  For each
    consecutive pair the intersection point on the face's side is
    collected; the report carries the worst spread."""
    bad = []
    worst = 0.0
    for f in sorted(layout.surface.faces):
        darts = layout.surface.faces[f]
        n = len(darts)
        if f in layout.face_points:
            anchor = layout.face_points[f]
        else:
            anchor = sum(layout.face_corners[f]) / n
        chosen = []
        for i in range(n):
            za = layout.face_corners[f][i]
            zb = layout.face_corners[f][(i + 1) % n]
            va = layout.face_copy[(f, i)][0]
            vb = layout.face_copy[(f, (i + 1) % n)][0]
            c1 = _euclid(HypCircle(za, layout.radii[va]))
            c2 = _euclid(HypCircle(zb, layout.radii[vb]))
            z1, s1 = c1
            z2, s2 = c2
            d = abs(z2 - z1)
            if d >= s1 + s2 or d <= abs(s1 - s2):
                chosen.append(None)
                continue
            a = (s1 * s1 - s2 * s2 + d * d) / (2.0 * d)
            h = math.sqrt(max(s1 * s1 - a * a, 0.0))
            axis = (z2 - z1) / d
            mid = z1 + a * axis
            cands = (mid + h * axis * 1j, mid - h * axis * 1j)
            chosen.append(min(cands, key=lambda p: abs(p - anchor)))
        pts = [p for p in chosen if p is not None]
        if len(pts) < 2:
            bad.append(Violation("no-intersections", f"face {f}", 0.0, 0.0))
            continue
        spread = max(
            hyp_distance(p, q) for i, p in enumerate(pts) for q in pts[i + 1:]
        )
        worst = max(worst, spread)
        if spread > tol:
            bad.append(Violation("interstice-spread", f"face {f}", spread, tol))
    return ConditionReport(passed=not bad, violations=bad, stats={"max_spread": worst})


# -- SVG emission ------------------------------------------------------------


def _num(x: float) -> str:
    s = format(float(x), ".12g")
    return "0" if s in ("-0", "-0.0") else s


def _geodesic_path(p: complex, q: complex) -> str:
    """SVG path command chain from p to q along the geodesic, in emitted
    (y-flipped) coordinates."""
    pe = complex(p.real, -p.imag)
    qe = complex(q.real, -q.imag)
    cross = (p.real * q.imag - p.imag * q.real)
    if abs(cross) < 1e-13 * max(abs(p) * abs(q), 1e-30):
        return f"M {_num(pe.real)} {_num(pe.imag)} L {_num(qe.real)} {_num(qe.imag)}"
    # circle through p, q orthogonal to the unit circle
    det = 2.0 * cross
    b1 = 1.0 + abs(p) ** 2
    b2 = 1.0 + abs(q) ** 2
    cx = (b1 * q.imag - b2 * p.imag) / det
    cy = (b2 * p.real - b1 * q.real) / det
    rho = math.sqrt(cx * cx + cy * cy - 1.0)
    ce = complex(cx, -cy)
    sweep = 1 if ((pe - ce).real * (qe - ce).imag - (pe - ce).imag * (qe - ce).real) > 0 else 0
    return (
        f"M {_num(pe.real)} {_num(pe.imag)} "
        f"A {_num(rho)} {_num(rho)} 0 0 {sweep} {_num(qe.real)} {_num(qe.imag)}"
    )


_SHADE = ("#dbeafe", "#dcfce7", "#fef9c3", "#fde2e2", "#ede9fe", "#cffafe")


def emit_svg(layout: DiskLayout, labels: bool = False, shade: bool = False) -> str:
    """Deterministic SVG: boundary, then faces, edges, circles, labels."""
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1" '
        'width="840" height="840">',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" stroke-width="0.004"/>',
    ]
    if shade:
        for f in sorted(layout.face_corners):
            path = _face_path(layout.face_corners[f])
            out.append(
                f'<path d="{path} Z" fill="{_SHADE[f % len(_SHADE)]}" '
                'fill-opacity="0.6" stroke="none"/>'
            )
    for f in sorted(layout.face_corners):
        pts = layout.face_corners[f]
        n = len(pts)
        for i in range(n):
            out.append(
                f'<path d="{_geodesic_path(pts[i], pts[(i + 1) % n])}" '
                'fill="none" stroke="#555555" stroke-width="0.003"/>'
            )
    for (v, ci) in sorted(layout.circles):
        zc, rc = hyp_circle_to_euclidean(layout.circles[(v, ci)])
        out.append(
            f'<circle cx="{_num(zc.real)}" cy="{_num(-zc.imag)}" '
            f'r="{_num(rc)}" fill="none" stroke="#1d4ed8" stroke-width="0.004"/>'
        )
    if labels:
        for (v, ci) in sorted(layout.circles):
            z = layout.circles[(v, ci)].center
            out.append(
                f'<text x="{_num(z.real)}" y="{_num(-z.imag)}" font-size="0.05" '
                f'text-anchor="middle" fill="#111111">{v}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _face_path(pts: list[complex]) -> str:
    n = len(pts)
    segs = []
    for i in range(n):
        full = _geodesic_path(pts[i], pts[(i + 1) % n])
        segs.append(full if i == 0 else full.split(" ", 3)[3])
    return " ".join(segs)
