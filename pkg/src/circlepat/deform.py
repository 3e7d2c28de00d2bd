"""Cookie-cutter deformation: pack a planar region with a hexagonal
circle packing, splice the packing's contact complex into a face of the
surface with tangency edges, solve the enlarged triangulation, and
discard the auxiliary disks.

Refinement over increasing n probes convergence of the restricted
pattern; the reports record successive differences and never claim a
limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from shapely.geometry import Point, Polygon

from . import solver
from .hypgeo import align, hyp_circle_to_euclidean, hyp_distance, HypCircle
from .layout import develop
from .solver import PatternSolution
from .surface import CellularSurface, check_origin_in_Y

SQRT3_2 = math.sqrt(3.0) / 2.0
CORNER_SLACK = 1.1
DIFF_SLACK = 1.5


class RegionTooSmall(ValueError):
    pass


class GluingNotTriangular(ValueError):
    pass


@dataclass(frozen=True)
class PlanarRegion:
    """Simple polygon, corners counterclockwise; side i runs from corner
    i to corner i+1 and models the i-th circle of the face it fills."""

    corners: tuple[complex, ...]

    def __post_init__(self):
        if len(self.corners) < 3:
            raise ValueError("a region needs at least 3 corners")
        area = 0.0
        n = len(self.corners)
        for i in range(n):
            a, b = self.corners[i], self.corners[(i + 1) % n]
            area += a.real * b.imag - b.real * a.imag
        if area <= 0.0:
            raise ValueError("region corners must wind counterclockwise")
        if not self.polygon().is_valid:
            raise ValueError("region polygon must be simple")

    def polygon(self) -> Polygon:
        return Polygon([(z.real, z.imag) for z in self.corners])

    def side(self, i: int) -> tuple[complex, complex]:
        return self.corners[i], self.corners[(i + 1) % len(self.corners)]

    @property
    def size(self) -> int:
        return len(self.corners)


def region_from_points(points) -> PlanarRegion:
    return PlanarRegion(tuple(complex(x, y) for x, y in points))


@dataclass
class CookiePacking:
    mesh: float
    centers: dict[tuple[int, int], complex]
    triangles: list[tuple[tuple[int, int], ...]]
    contact_edges: list[tuple[tuple[int, int], tuple[int, int]]]
    boundary: list[tuple[int, int]]
    sides: dict[tuple[int, int], tuple[int, ...]]
    interior: list[tuple[int, int]]


_NEIGHBORS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def cookie_cutter(region: PlanarRegion, n: int) -> CookiePacking:
    """Disks of radius 1/n on the regular hexagonal lattice (anchored at
    the region centroid, axis along +x) whose closed disk meets the
    region, with their tangency complex and side-marked boundary cycle."""
    if not (2 <= n <= 64):
        raise ValueError(f"n must be in [2, 64], got {n}")
    poly = region.polygon()
    radius = 1.0 / n
    spacing = 2.0 / n
    c = poly.centroid
    cx, cy = c.x, c.y

    minx, miny, maxx, maxy = poly.bounds
    jlo = math.floor((miny - radius - cy) / (spacing * SQRT3_2)) - 1
    jhi = math.ceil((maxy + radius - cy) / (spacing * SQRT3_2)) + 1
    centers: dict[tuple[int, int], complex] = {}
    for j in range(jlo, jhi + 1):
        y = cy + spacing * SQRT3_2 * j
        ilo = math.floor((minx - radius - cx) / spacing - j / 2.0) - 1
        ihi = math.ceil((maxx + radius - cx) / spacing - j / 2.0) + 1
        for i in range(ilo, ihi + 1):
            x = cx + spacing * (i + j / 2.0)
            if poly.distance(Point(x, y)) <= radius:
                centers[(i, j)] = complex(x, y)

    triangles = []
    for (i, j) in sorted(centers):
        up = ((i, j), (i + 1, j), (i, j + 1))
        if all(k in centers for k in up):
            triangles.append(up)
        down = ((i, j), (i, j + 1), (i - 1, j + 1))
        if all(k in centers for k in down):
            triangles.append(down)
    if not triangles:
        raise RegionTooSmall(
            f"{len(centers)} disks at n={n} span no tangency triangle"
        )

    used = {k for t in triangles for k in t}
    stray = sorted(set(centers) - used)
    if stray:
        raise GluingNotTriangular(
            f"disks {stray[:4]} touch the region but no tangency triangle"
        )

    contact_edges = sorted(
        {tuple(sorted((k, (k[0] + di, k[1] + dj)))) for k in centers
         for di, dj in _NEIGHBORS if (k[0] + di, k[1] + dj) in centers}
    )

    # boundary walk: darts of triangles (counterclockwise) whose reverse
    # never occurs; one outgoing dart per boundary vertex or the complex
    # is pinched
    darts = set()
    for t in triangles:
        for s in range(3):
            darts.add((t[s], t[(s + 1) % 3]))
    outgoing: dict[tuple[int, int], tuple[int, int]] = {}
    for (a, b) in darts:
        if (b, a) not in darts:
            if a in outgoing:
                raise GluingNotTriangular(f"packing pinched at disk {a}")
            outgoing[a] = b
    if not outgoing:
        raise GluingNotTriangular("packing has no boundary")
    start = min(outgoing)
    cycle = [start]
    while True:
        nxt = outgoing[cycle[-1]]
        if nxt == start:
            break
        if nxt in cycle:
            raise GluingNotTriangular(f"boundary revisits disk {nxt}")
        cycle.append(nxt)
    if len(cycle) != len(outgoing):
        raise GluingNotTriangular("packing boundary is not a single cycle")

    interior = sorted(set(centers) - set(cycle))
    if len(interior) < region.size:
        raise RegionTooSmall(
            f"{len(interior)} interior disks at n={n}, need {region.size}"
        )

    sides = _assign_sides(region, centers, cycle)

    return CookiePacking(
        mesh=radius,
        centers=centers,
        triangles=triangles,
        contact_edges=contact_edges,
        boundary=cycle,
        sides=sides,
        interior=interior,
    )


def _assign_sides(region: PlanarRegion, centers, cycle) -> dict:
    """Nearest-side assignment with two-sided corner disks. A disk whose
    two nearest sides are adjacent and within 10% is a corner candidate;
    each side transition then gets exactly one corner disk, falling back
    to the adjacent disk nearest the region corner when the candidates
    leave the transition empty or contested."""
    m = region.size
    L = len(cycle)
    primary: list[int] = []
    raw_pair: dict[int, tuple[int, int]] = {}
    for pos, k in enumerate(cycle):
        z = centers[k]
        dists = sorted(
            (_segment_distance(z, *region.side(s)), s) for s in range(m)
        )
        (d1, s1), (d2, s2) = dists[0], dists[1]
        primary.append(s1)
        if d2 <= CORNER_SLACK * d1 and (s2 - s1) % m in (1, m - 1):
            lo = s1 if (s2 - s1) % m == 1 else s2
            raw_pair[pos] = (lo, (lo + 1) % m)

    sides = {k: (primary[pos],) for pos, k in enumerate(cycle)}

    # maximal runs of constant primary side, in cycle order
    breaks = [pos for pos in range(L) if primary[pos] != primary[pos - 1]]
    if not breaks:
        return sides
    runs: list[tuple[int, int, int]] = []
    for b, (start, nxt) in enumerate(zip(breaks, breaks[1:] + breaks[:1])):
        runs.append((primary[start], start, (nxt - 1) % L))
    order = [r[0] for r in runs]
    if len(order) != m or any(
        (order[(t + 1) % m] - order[t]) % m != 1 for t in range(m)
    ):
        return sides

    taken: set[int] = set()
    for side, _, last in runs:
        pair = (side, (side + 1) % m)
        p, q = last, (last + 1) % L
        flagged = [pos for pos in (p, q)
                   if raw_pair.get(pos) == pair and pos not in taken]
        if len(flagged) == 1:
            chosen = flagged[0]
        else:
            corner_pt = region.corners[(side + 1) % m]
            free = [pos for pos in (p, q) if pos not in taken]
            if not free:
                raise GluingNotTriangular(
                    f"side {side} too thin to host its corner disks"
                )
            chosen = min(
                free, key=lambda pos: (abs(centers[cycle[pos]] - corner_pt), pos)
            )
        sides[cycle[chosen]] = pair
        taken.add(chosen)
    return sides


@dataclass
class GluedProblem:
    surface: CellularSurface
    weights: dict[int, float]
    provenance: dict[int, tuple[int, tuple[int, int]]]
    new_edges: frozenset[int]
    corner_faces: dict[tuple[int, int], int] = field(default_factory=dict)


def glue(surface: CellularSurface, alpha: int, packing: CookiePacking,
         weights: dict[int, float]) -> GluedProblem:
    """Replace face alpha by the packing complex: packing triangles keep
    their tangencies, each boundary disk is joined to the original
    vertex of its assigned side, and each original edge of the face ends
    up in a triangle with the corner disk of its transition."""
    face_darts = surface.faces[alpha]
    m = len(face_darts)
    v_of = [surface.tail(d) for d in face_darts]

    # sides must appear in increasing cyclic runs around the boundary,
    # with exactly one two-sided disk per transition
    cycle = packing.boundary
    corner_at: dict[int, tuple[int, int]] = {}
    for k in cycle:
        s = packing.sides[k]
        if len(s) == 2:
            if s[0] in corner_at:
                raise GluingNotTriangular(
                    f"transition {s[0]}->{s[1]} has two corner disks"
                )
            corner_at[s[0]] = k
    missing = [i for i in range(m) if i not in corner_at]
    if missing:
        raise GluingNotTriangular(f"transitions {missing} have no corner disk")

    vid = max(surface.vertices) + 1
    new_vertex: dict[tuple[int, int], int] = {}
    provenance: dict[int, tuple[int, tuple[int, int]]] = {}
    for k in sorted(packing.centers):
        new_vertex[k] = vid
        provenance[vid] = (alpha, k)
        vid += 1

    edges = dict(surface.edges)
    new_weights = dict(weights)
    eid = max(edges) + 1
    pair_edge: dict[frozenset, int] = {}

    def edge_between(a: int, b: int) -> int:
        nonlocal eid
        key = frozenset((a, b))
        if key not in pair_edge:
            edges[eid] = (a, b)
            new_weights[eid] = 0.0
            pair_edge[key] = eid
            eid += 1
        return pair_edge[key]

    def dart(a: int, b: int) -> tuple[int, int]:
        e = edge_between(a, b)
        return (e, 1) if edges[e] == (a, b) else (e, -1)

    faces = {f: list(ds) for f, ds in surface.faces.items() if f != alpha}
    fid = max(surface.faces) + 1

    for t in packing.triangles:
        a, b, c = (new_vertex[k] for k in t)
        faces[fid] = [dart(a, b), dart(b, c), dart(c, a)]
        fid += 1

    # zip triangles: one per packing boundary dart, apex at the original
    # vertex of the disks' shared side
    L = len(cycle)
    for t in range(L):
        b, b2 = cycle[t], cycle[(t + 1) % L]
        common = set(packing.sides[b]) & set(packing.sides[b2])
        if len(common) != 1:
            raise GluingNotTriangular(
                f"boundary disks {b} and {b2} share sides {sorted(common)}"
            )
        v = v_of[common.pop()]
        nb, nb2 = new_vertex[b], new_vertex[b2]
        faces[fid] = [dart(nb2, nb), dart(nb, v), dart(v, nb2)]
        fid += 1

    corner_faces: dict[tuple[int, int], int] = {}
    for i in range(m):
        c = new_vertex[corner_at[i]]
        vi, vj = v_of[i], v_of[(i + 1) % m]
        faces[fid] = [face_darts[i], dart(vj, c), dart(c, vi)]
        corner_faces[(alpha, i)] = fid
        fid += 1

    glued = CellularSurface(
        list(surface.vertices) + sorted(provenance),
        edges,
        faces,
        name=surface.name + "+glued",
    )
    report = glued.validate()
    if not report.passed:
        raise GluingNotTriangular("glued complex invalid:\n" + report.summary())
    return GluedProblem(
        surface=glued,
        weights=new_weights,
        provenance=provenance,
        new_edges=frozenset(e for e in edges if e not in surface.edges),
        corner_faces=corner_faces,
    )


def build_glued(surface: CellularSurface, weights: dict[int, float],
                regions: dict[int, PlanarRegion], n: int) -> GluedProblem:
    """Glue a packing into every face that has a region, in face order."""
    for f, region in sorted(regions.items()):
        if len(surface.faces[f]) != region.size:
            raise ValueError(
                f"face {f} has {len(surface.faces[f])} sides, region has {region.size}"
            )
    current = GluedProblem(surface, dict(weights), {}, frozenset())
    for f in sorted(regions):
        packing = cookie_cutter(regions[f], n)
        step = glue(current.surface, f, packing, current.weights)
        current = GluedProblem(
            surface=step.surface,
            weights=step.weights,
            provenance={**current.provenance, **step.provenance},
            new_edges=current.new_edges | step.new_edges,
            corner_faces={**current.corner_faces, **step.corner_faces},
        )
    return current


def deform_solve(surface: CellularSurface, weights: dict[int, float],
                 regions: dict[int, PlanarRegion], n: int = 4,
                 tol: float = solver.DEFAULT_TOL,
                 subset_bound: int = 4,
                 glued: GluedProblem | None = None,
                 ) -> tuple[PatternSolution, PatternSolution]:
    """Solve the glued triangulation and restrict to original vertices.

    The solvability check runs on the glued problem at the given subset
    bound (partial beyond desk scale); solver failures are re-raised
    with the hosting region attached.
    """
    if glued is None:
        glued = build_glued(surface, weights, regions, n)
    report = check_origin_in_Y(glued.surface, glued.weights, subset_bound=subset_bound)
    if not report.passed:
        raise solver.CheckFailed(report)
    try:
        full = solver.solve(glued.surface, glued.weights, tol=tol, force=True)
    except solver.DegenerationDetected as exc:
        hosts = sorted({glued.provenance[v][0] for v in exc.vertices
                        if v in glued.provenance})
        exc.args = (f"{exc.args[0]}; auxiliary regions involved: faces {hosts}",)
        raise
    restricted_radii = {v: full.radii[v] for v in surface.vertices}
    tri_angles: dict[tuple[int, int], float] = {}
    for f, darts in surface.faces.items():
        if f in regions or len(darts) != 3:
            continue
        for k in range(3):
            tri_angles[(f, k)] = full.corner_angles[(f, k)]
    restricted = PatternSolution(
        radii=restricted_radii,
        residual=full.residual,
        corner_angles=tri_angles,
        iterations=full.iterations,
        mode="restricted",
        surface_name=surface.name,
    )
    return full, restricted


# -- refinement experiments --------------------------------------------------


@dataclass
class RefinementRow:
    n: int
    restricted_radii: dict[int, float]
    corners: dict[int, list[complex]]
    cross_ratio: dict[int, complex]
    min_radius: float
    residual: float


@dataclass
class RefinementReport:
    rows: list[RefinementRow]
    radius_diffs: list[float]
    corner_diffs: dict[int, list[float]]
    crossratio_diffs: dict[int, list[float]]

    def diffs_decreasing(self, slack: float = DIFF_SLACK) -> bool:
        seqs = [self.radius_diffs, *self.corner_diffs.values(),
                *self.crossratio_diffs.values()]
        return all(
            later <= slack * earlier
            for seq in seqs for earlier, later in zip(seq, seq[1:])
        )

    def table(self) -> str:
        lines = ["   n   min_radius      residual    max_radius_diff"]
        prev = None
        for row in self.rows:
            diff = ""
            if prev is not None:
                d = max(abs(row.restricted_radii[v] - prev[v])
                        for v in row.restricted_radii)
                diff = f"{d:18.12g}"
            lines.append(f"{row.n:4d}   {row.min_radius:10.8f}   {row.residual:11.3e} {diff}")
            prev = row.restricted_radii
        return "\n".join(lines) + "\n"


def _interstice_corners(glued: GluedProblem, alpha: int, m: int,
                        layout_obj) -> list[complex]:
    """Corner points of the face's interstice: where consecutive original
    circles meet, on the packing side."""
    pts = []
    for i in range(m):
        f = glued.corner_faces[(alpha, i)]
        za, zb, zc = layout_obj.face_corners[f]
        va = layout_obj.face_copy[(f, 0)][0]
        vb = layout_obj.face_copy[(f, 1)][0]
        c1 = hyp_circle_to_euclidean(HypCircle(za, layout_obj.radii[va]))
        c2 = hyp_circle_to_euclidean(HypCircle(zb, layout_obj.radii[vb]))
        z1, s1 = c1
        z2, s2 = c2
        d = abs(z2 - z1)
        if d >= s1 + s2 - 1e-12:
            pts.append(z1 + (z2 - z1) * s1 / (s1 + s2))
            continue
        a = (s1 * s1 - s2 * s2 + d * d) / (2.0 * d)
        h = math.sqrt(max(s1 * s1 - a * a, 0.0))
        axis = (z2 - z1) / d
        mid = z1 + a * axis
        cands = (mid + h * axis * 1j, mid - h * axis * 1j)
        pts.append(min(cands, key=lambda p: abs(p - zc)))
    return pts


def _normalize_corners(pts: list[complex]) -> list[complex]:
    g = align(pts[0], pts[1], 0j,
              math.tanh(hyp_distance(pts[0], pts[1]) / 2.0) + 0j)
    return [g(p) for p in pts]


def refinement_experiment(surface: CellularSurface, weights: dict[int, float],
                          regions: dict[int, PlanarRegion], n_list: list[int],
                          tol: float = solver.DEFAULT_TOL,
                          subset_bound: int = 4) -> RefinementReport:
    rows: list[RefinementRow] = []
    for n in n_list:
        glued = build_glued(surface, weights, regions, n)
        full, restricted = deform_solve(
            surface, weights, regions, n, tol=tol,
            subset_bound=subset_bound, glued=glued,
        )
        lay = develop(glued.surface, glued.weights, full)
        corners: dict[int, list[complex]] = {}
        cross: dict[int, complex] = {}
        for alpha in sorted(regions):
            m = regions[alpha].size
            pts = _normalize_corners(_interstice_corners(glued, alpha, m, lay))
            corners[alpha] = pts
            if m == 4:
                z1, z2, z3, z4 = pts
                cross[alpha] = ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3))
        rows.append(RefinementRow(
            n=n,
            restricted_radii=restricted.radii,
            corners=corners,
            cross_ratio=cross,
            min_radius=min(full.radii.values()),
            residual=full.residual,
        ))
    radius_diffs = [
        max(abs(b.restricted_radii[v] - a.restricted_radii[v])
            for v in a.restricted_radii)
        for a, b in zip(rows, rows[1:])
    ]
    corner_diffs = {
        alpha: [
            max(abs(p - q) for p, q in zip(a.corners[alpha], b.corners[alpha]))
            for a, b in zip(rows, rows[1:])
        ]
        for alpha in regions
    }
    crossratio_diffs = {
        alpha: [
            abs(b.cross_ratio[alpha] - a.cross_ratio[alpha])
            for a, b in zip(rows, rows[1:])
        ]
        for alpha in regions if regions[alpha].size == 4
    }
    return RefinementReport(rows, radius_diffs, corner_diffs, crossratio_diffs)
