"""Regenerate the bundled example surfaces and the sample region.

Writes into src/circlepat/data/.  Every instance is certified by the
surface validator before anything touches disk.
"""

from __future__ import annotations

import sys
from pathlib import Path

from circlepat.files import serialize_region, serialize_surface, write_text_atomic
from circlepat.surface import CellularSurface

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "circlepat" / "data"


def _certify(s: CellularSurface) -> None:
    report = s.validate()
    if not report.passed:
        raise RuntimeError(f"{s.name}: {report.summary()}")

# Degree-8 triangulation of the genus-2 surface on 6 vertices, found by
# searching Cayley maps of Z/6 (generator sequence (1,3,4,2,5,2,4,3) with
# inverse pairing (4,1,3,2,0,6,5,7), one vertex orbit).  Every vertex has
# degree 8, so equal radii and equal weights give a vertex-transitive
# pattern.
REGULAR_EDGES = {
    0: (0, 1), 1: (0, 3), 2: (0, 4), 3: (0, 2), 4: (0, 5), 5: (0, 2),
    6: (0, 4), 7: (0, 3), 8: (1, 2), 9: (1, 4), 10: (1, 5), 11: (1, 3),
    12: (1, 3), 13: (1, 5), 14: (1, 4), 15: (2, 3), 16: (2, 5), 17: (2, 4),
    18: (2, 4), 19: (2, 5), 20: (3, 4), 21: (3, 5), 22: (3, 5), 23: (4, 5),
}
REGULAR_FACES = {
    0: [(0, 1), (12, 1), (7, -1)],
    1: [(1, 1), (11, -1), (0, -1)],
    2: [(2, 1), (20, -1), (1, -1)],
    3: [(3, 1), (17, 1), (2, -1)],
    4: [(4, 1), (16, -1), (3, -1)],
    5: [(5, 1), (19, 1), (4, -1)],
    6: [(6, 1), (18, -1), (5, -1)],
    7: [(7, 1), (20, 1), (6, -1)],
    8: [(8, 1), (18, 1), (14, -1)],
    9: [(9, 1), (17, -1), (8, -1)],
    10: [(10, 1), (23, -1), (9, -1)],
    11: [(11, 1), (21, 1), (10, -1)],
    12: [(13, 1), (22, -1), (12, -1)],
    13: [(14, 1), (23, 1), (13, -1)],
    14: [(15, 1), (22, 1), (19, -1)],
    15: [(16, 1), (21, -1), (15, -1)],
}

# Four quadrilaterals glued along 8 parallel edges between 2 vertices
# (rotation (0 1 2 7)(4 5 6 3) on the edge indices).  chi = -2, every
# face has 4 distinct sides, so constant weight pi/2 sums to 2*pi on
# each face.
QUAD_FACES = {
    0: [(0, 1), (1, -1), (2, 1), (7, -1)],
    1: [(1, 1), (2, -1), (3, 1), (0, -1)],
    2: [(4, 1), (5, -1), (6, 1), (3, -1)],
    3: [(5, 1), (6, -1), (7, 1), (4, -1)],
}


def regular_surface() -> CellularSurface:
    s = CellularSurface(range(6), REGULAR_EDGES, REGULAR_FACES, name="genus2-regular")
    _certify(s)
    return s


def quad_surface() -> CellularSurface:
    edges = {e: (0, 1) for e in range(8)}
    s = CellularSurface([0, 1], edges, QUAD_FACES, name="genus2-quad")
    _certify(s)
    return s


def octagon_surface() -> CellularSurface:
    """Octagon with identifications a b a' b' c d c' d', each side
    subdivided at a midpoint, then coned from a center vertex.

    Vertices: 0 the octagon corner, 1..4 the side midpoints, 5 the
    center.  16 cone triangles; the midpoints have degree 4.
    """
    v0, ma, mb, mc, md, c = range(6)
    edges: dict[int, tuple[int, int]] = {}
    # boundary half-sides: a1 a2 b1 b2 c1 c2 d1 d2 -> ids 0..7
    for i, m in enumerate((ma, mb, mc, md)):
        edges[2 * i] = (v0, m)
        edges[2 * i + 1] = (m, v0)
    a1, a2, b1, b2, c1, c2, d1, d2 = range(8)
    walk = [
        (a1, 1), (a2, 1), (b1, 1), (b2, 1),
        (a2, -1), (a1, -1), (b2, -1), (b1, -1),
        (c1, 1), (c2, 1), (d1, 1), (d2, 1),
        (c2, -1), (c1, -1), (d2, -1), (d1, -1),
    ]
    corners = []
    for e, s in walk:
        u, w = edges[e]
        corners.append(u if s > 0 else w)
    # spokes: edge 8+t joins the center to the t-th 16-gon corner
    for t, u in enumerate(corners):
        edges[8 + t] = (c, u)
    faces = {}
    for t in range(16):
        faces[t] = [(8 + t, 1), walk[t], (8 + (t + 1) % 16, -1)]
    s = CellularSurface(range(6), edges, faces, name="genus2-pocket")
    _certify(s)
    return s


def mixed_surface() -> tuple[CellularSurface, int]:
    """The regular triangulation with one edge removed, merging two
    triangles into a quadrilateral with 4 distinct corners and sides.
    Returns the surface and the id of the quad face.
    """
    base = regular_surface()
    for e in sorted(base.edges):
        fs = [f for f, darts in base.faces.items() if any(d[0] == e for d in darts)]
        if len(fs) != 2:
            continue
        f1, f2 = fs
        shared = {d[0] for d in base.faces[f1]} & {d[0] for d in base.faces[f2]}
        if shared != {e}:
            continue
        i = next(k for k, d in enumerate(base.faces[f1]) if d[0] == e)
        j = next(k for k, d in enumerate(base.faces[f2]) if d[0] == e)
        a = base.faces[f1]
        b = base.faces[f2]
        merged = a[i + 1:] + a[:i] + b[j + 1:] + b[:j]
        if len({base.tail(d) for d in merged}) != 4:
            continue
        edges = {k: v for k, v in base.edges.items() if k != e}
        faces = {k: list(v) for k, v in base.faces.items() if k not in (f1, f2)}
        quad = min(f1, f2)
        faces[quad] = merged
        s = CellularSurface(range(6), edges, faces, name="genus2-mixed")
        _certify(s)
        emap = {old: new for new, old in enumerate(sorted(edges))}
        fmap = {old: new for new, old in enumerate(sorted(faces))}
        s = s.relabel({v: v for v in s.vertices}, emap, fmap)
        _certify(s)
        return s, fmap[quad]
    raise RuntimeError("no removable edge found")


def main() -> int:
    DATA_DIR.mkdir(parents=True, exist_ok=True)

    reg = regular_surface()
    write_text_atomic(DATA_DIR / "genus2_regular.surface",
                      serialize_surface(reg, {}))

    quad = quad_surface()
    weights = {e: "pi*1/2" for e in quad.edges}
    text = serialize_surface(quad, {})
    lines = []
    for line in text.splitlines():
        if line.startswith("edge"):
            line += " theta=pi*1/2"
        lines.append(line)
    write_text_atomic(DATA_DIR / "genus2_quad.surface", "\n".join(lines) + "\n")

    poc = octagon_surface()
    write_text_atomic(DATA_DIR / "genus2_pocket.surface",
                      serialize_surface(poc, {}))

    mix, quad_face = mixed_surface()
    write_text_atomic(DATA_DIR / "genus2_mixed.surface",
                      serialize_surface(mix, {}))

    square = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    write_text_atomic(DATA_DIR / "square.region",
                      serialize_region(quad_face, square))

    for s in (reg, quad, poc, mix):
        st = s.validate().stats
        print(f"{s.name}: V={st['vertices']} E={st['edges']} F={st['faces']} "
              f"chi={st['chi']} genus={st['genus']} dof={st['deformation_dof']}")
    print(f"square.region -> face {quad_face} of genus2-mixed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
