"""Closed oriented cellular surfaces given as rotation systems.

A surface is a set of faces, each a cyclic list of oriented edge
instances (darts).  Every edge carries exactly two darts, one per
orientation, so the faces determine the gluing and the orientation.
Loops are forbidden; parallel edges are allowed.  Intersection-angle
weights live on edges as a plain dict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Dart = tuple[int, int]  # (edge id, +1 or -1)

TWO_PI = 2.0 * math.pi


class NotATriangulation(ValueError):
    """Operation requires every face to be a triangle."""


class WeightOutOfRange(ValueError):
    """Edge weight outside the range the check is stated for."""


@dataclass
class Violation:
    kind: str
    witness: str
    lhs: float
    rhs: float

    def __str__(self) -> str:
        return f"[{self.kind}] {self.witness}: lhs={self.lhs:.12g} rhs={self.rhs:.12g}"


@dataclass
class ConditionReport:
    passed: bool
    violations: list[Violation] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    partial: bool = False

    def summary(self) -> str:
        lines = ["pass" if self.passed else "FAIL"]
        if self.partial:
            lines[0] += " (partial verification)"
        for v in self.violations:
            lines.append(str(v))
        for k in sorted(self.stats):
            lines.append(f"  {k} = {self.stats[k]}")
        return "\n".join(lines)


def twin(d: Dart) -> Dart:
    return (d[0], -d[1])


class CellularSurface:
    def __init__(
        self,
        vertices: list[int],
        edges: dict[int, tuple[int, int]],
        faces: dict[int, list[Dart]],
        name: str = "",
    ) -> None:
        self.name = name
        self.vertices = sorted(vertices)
        self.edges = dict(sorted(edges.items()))
        self.faces = {f: list(ds) for f, ds in sorted(faces.items())}
        self._index()

    def _index(self) -> None:
        self._dart_pos: dict[Dart, tuple[int, int]] = {}
        for f, darts in self.faces.items():
            for i, d in enumerate(darts):
                self._dart_pos[d] = (f, i)
        self._vertex_darts: dict[int, list[Dart]] = {v: [] for v in self.vertices}
        for f, darts in self.faces.items():
            for d in darts:
                t = self.tail(d)
                if t in self._vertex_darts:
                    self._vertex_darts[t].append(d)

    # -- basic incidence ------------------------------------------------

    def tail(self, d: Dart) -> int:
        v1, v2 = self.edges[d[0]]
        return v1 if d[1] > 0 else v2

    def head(self, d: Dart) -> int:
        v1, v2 = self.edges[d[0]]
        return v2 if d[1] > 0 else v1

    def next_in_face(self, d: Dart) -> Dart:
        f, i = self._dart_pos[d]
        darts = self.faces[f]
        return darts[(i + 1) % len(darts)]

    def face_of(self, d: Dart) -> int:
        return self._dart_pos[d][0]

    def face_corners(self, f: int) -> list[int]:
        return [self.tail(d) for d in self.faces[f]]

    def vertex_degree(self, v: int) -> int:
        return len(self._vertex_darts[v])

    def darts_at(self, v: int) -> list[Dart]:
        return list(self._vertex_darts[v])

    def rotation_successor(self, d: Dart) -> Dart:
        """Next dart out of tail(d) in the rotation around that vertex."""
        return self.next_in_face(twin(d))

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def genus(self) -> int:
        return (2 - self.euler_characteristic()) // 2

    def is_triangulation(self) -> bool:
        return all(len(ds) == 3 for ds in self.faces.values())

    def deformation_dof(self) -> int:
        return 2 * len(self.edges) - 3 * len(self.faces)

    def relabel(
        self,
        vertex_map: dict[int, int],
        edge_map: dict[int, int],
        face_map: dict[int, int],
    ) -> "CellularSurface":
        edges = {edge_map[e]: (vertex_map[a], vertex_map[b]) for e, (a, b) in self.edges.items()}
        faces = {
            face_map[f]: [(edge_map[e], s) for e, s in ds] for f, ds in self.faces.items()
        }
        return CellularSurface(
            [vertex_map[v] for v in self.vertices], edges, faces, name=self.name
        )

    # -- validation -----------------------------------------------------

    def validate(self) -> ConditionReport:
        bad: list[Violation] = []
        vset = set(self.vertices)
        for e, (a, b) in self.edges.items():
            if a not in vset or b not in vset:
                bad.append(Violation("unknown-vertex", f"edge {e} = ({a}, {b})", 0, 0))
            elif a == b:
                bad.append(Violation("loop-edge", f"edge {e} at vertex {a}", 0, 0))
        counts: dict[Dart, int] = {}
        for f, darts in self.faces.items():
            if len(darts) < 3:
                bad.append(Violation("short-face", f"face {f} has {len(darts)} sides", len(darts), 3))
            for d in darts:
                if d[0] not in self.edges:
                    bad.append(Violation("unknown-edge", f"face {f} references edge {d[0]}", 0, 0))
                else:
                    counts[d] = counts.get(d, 0) + 1
        if not bad:
            for e in self.edges:
                for s in (1, -1):
                    c = counts.get((e, s), 0)
                    if c != 1:
                        bad.append(
                            Violation(
                                "edge-instance-balance",
                                f"instance ({e}, {s:+d}) used {c} times",
                                c,
                                1,
                            )
                        )
        if not bad:
            for f, darts in self.faces.items():
                for i, d in enumerate(darts):
                    nxt = darts[(i + 1) % len(darts)]
                    if self.head(d) != self.tail(nxt):
                        bad.append(
                            Violation(
                                "face-walk-broken",
                                f"face {f}: dart {d} head {self.head(d)} vs {nxt} tail {self.tail(nxt)}",
                                0,
                                0,
                            )
                        )
            for v in self.vertices:
                darts = self._vertex_darts[v]
                if not darts:
                    bad.append(Violation("isolated-vertex", f"vertex {v}", 0, 0))
                    continue
                seen = {darts[0]}
                d = self.rotation_successor(darts[0])
                while d not in seen:
                    seen.add(d)
                    d = self.rotation_successor(d)
                if len(seen) != len(darts):
                    bad.append(
                        Violation(
                            "vertex-link-disconnected",
                            f"vertex {v}: rotation orbit {len(seen)} of {len(darts)} darts",
                            len(seen),
                            len(darts),
                        )
                    )
        if not bad and self._component_count() != 1:
            bad.append(Violation("disconnected", "surface has multiple components", 0, 0))
        chi = self.euler_characteristic()
        if not bad:
            if chi % 2 != 0 or chi > -2:
                bad.append(
                    Violation("euler-characteristic", f"chi = {chi}, need even <= -2", chi, -2)
                )
        stats = {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "faces": len(self.faces),
            "chi": chi,
            "genus": (2 - chi) // 2 if chi % 2 == 0 else None,
            "deformation_dof": self.deformation_dof(),
        }
        return ConditionReport(passed=not bad, violations=bad, stats=stats)

    def _component_count(self) -> int:
        if not self.vertices:
            return 0
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        adj = {v: set() for v in self.vertices}
        for a, b in self.edges.values():
            adj[a].add(b)
            adj[b].add(a)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return 1 if len(seen) == len(self.vertices) else 2


# -- star closures and links --------------------------------------------


@dataclass
class StarClosure:
    vertices: frozenset[int]
    edges: frozenset[int]
    faces: frozenset[int]
    chi: int
    components: int


def star_closure(surface: CellularSurface, v0: set[int]) -> StarClosure:
    """Union of the open cells having at least one vertex in v0."""
    v_in = frozenset(v0) & frozenset(surface.vertices)
    e_in = frozenset(
        e for e, (a, b) in surface.edges.items() if a in v_in or b in v_in
    )
    f_in = frozenset(
        f for f in surface.faces if any(c in v_in for c in surface.face_corners(f))
    )
    chi = len(v_in) - len(e_in) + len(f_in)
    comp = _cell_components(surface, v_in, e_in, f_in)
    return StarClosure(v_in, e_in, f_in, chi, comp)


def _cell_components(surface, v_in, e_in, f_in) -> int:
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    cells = [("v", v) for v in v_in] + [("e", e) for e in e_in] + [("f", f) for f in f_in]
    for c in cells:
        parent[c] = c
    for e in e_in:
        a, b = surface.edges[e]
        if a in v_in:
            union(("e", e), ("v", a))
        if b in v_in:
            union(("e", e), ("v", b))
    for f in f_in:
        for d in surface.faces[f]:
            if d[0] in e_in:
                union(("f", f), ("e", d[0]))
        for c in surface.face_corners(f):
            if c in v_in:
                union(("f", f), ("v", c))
    return len({find(c) for c in cells})


def link_pairs(surface: CellularSurface, v0: set[int]) -> list[tuple[int, int]]:
    """Pairs (edge, vertex) with the edge's endpoints outside v0, the
    vertex inside, and edge and vertex spanning a common triangle.  One
    pair per triangle occurrence, so parallel edges count separately."""
    if not surface.is_triangulation():
        raise NotATriangulation("link pairs are defined on triangulations")
    v_in = set(v0)
    out: list[tuple[int, int]] = []
    for f in sorted(surface.faces):
        darts = surface.faces[f]
        for i in range(3):
            v = surface.tail(darts[i])
            opp = darts[(i + 1) % 3][0]
            a, b = surface.edges[opp]
            if v in v_in and a not in v_in and b not in v_in:
                out.append((opp, v))
    return out


def _boundary_incidences(surface: CellularSurface, v0: set[int]) -> list[tuple[int, int]]:
    """(edge, face) pairs: face in the star closure, edge on its boundary
    with both endpoints outside v0.  One pair per face side, so a walk
    traversing an edge twice contributes twice."""
    out = []
    for f in sorted(surface.faces):
        if not any(c in v0 for c in surface.face_corners(f)):
            continue
        for d in surface.faces[f]:
            a, b = surface.edges[d[0]]
            if a not in v0 and b not in v0:
                out.append((d[0], f))
    return out


# -- subset enumeration -----------------------------------------------


def _face_sharing_graph(surface: CellularSurface) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in surface.vertices}
    for f in surface.faces:
        corners = set(surface.face_corners(f))
        for a in corners:
            adj[a] |= corners - {a}
    return adj


def _connected_subsets(adj: dict[int, set[int]], bound: int):
    """All subsets of size <= bound inducing a connected piece of the
    face-sharing graph, each exactly once (ESU enumeration)."""

    def extend(sub: frozenset, ext: set, root):
        yield sub
        if len(sub) >= bound:
            return
        ext = sorted(ext)
        while ext:
            w = ext.pop()
            closed = set(sub).union(*(adj[s] for s in sub))
            grow = {u for u in adj[w] if u > root and u not in closed}
            yield from extend(sub | {w}, set(ext) | grow, root)

    for v in sorted(adj):
        yield from extend(frozenset({v}), {u for u in adj[v] if u > v}, v)


def connected_vertex_subsets(surface: CellularSurface, bound: int):
    """Non-empty vertex sets whose star closure is connected.

    Exhaustive over all subsets when the surface has at most `bound`
    vertices; otherwise limited to sets of size <= bound (callers must
    flag the result as partial).
    """
    verts = surface.vertices
    if len(verts) <= bound:
        n = len(verts)
        for mask in range(1, 1 << n):
            v0 = frozenset(verts[i] for i in range(n) if mask >> i & 1)
            if star_closure(surface, v0).components == 1:
                yield v0
    else:
        yield from _connected_subsets(_face_sharing_graph(surface), bound)


# -- existence checks --------------------------------------------------


def _require_weights(surface, weights, lo, hi, lo_open=False):
    for e in surface.edges:
        if e not in weights:
            raise WeightOutOfRange(f"edge {e} has no weight")
        t = weights[e]
        if not (lo <= t < hi) or (lo_open and t <= lo):
            raise WeightOutOfRange(f"weight {t!r} on edge {e} outside range")


def check_origin_in_Y(
    surface: CellularSurface, weights: dict[int, float], subset_bound: int = 12
) -> ConditionReport:
    """Solvability of the zero-curvature problem on a triangulation.

    Per-face admissibility (the three-edge condition on each face
    boundary) is checked directly; the remaining conditions run over
    every non-empty vertex set with connected star closure, testing
    sum(Theta - pi) over the link pairs + 2 pi chi(star closure) < 0.
    """
    if not surface.is_triangulation():
        raise NotATriangulation("solvability check is stated for triangulations")
    _require_weights(surface, weights, 0.0, math.pi)
    bad: list[Violation] = []
    for f in sorted(surface.faces):
        s = sum(weights[d[0]] for d in surface.faces[f])
        if s >= math.pi:
            edges = ",".join(str(d[0]) for d in surface.faces[f])
            bad.append(Violation("face-weight-sum", f"face {f} (edges {edges})", s, math.pi))
    checked = 0
    for v0 in connected_vertex_subsets(surface, subset_bound):
        checked += 1
        lhs = sum(weights[e] - math.pi for e, _ in link_pairs(surface, v0))
        lhs += TWO_PI * star_closure(surface, v0).chi
        if lhs >= 0.0:
            bad.append(Violation("subset-inequality", _vset_name(v0), lhs, 0.0))
    partial = len(surface.vertices) > subset_bound
    stats = {
        "subsets_checked": checked,
        "subset_bound": subset_bound,
        "target_curvature_bound": "k(v) = 0 < 2 pi holds by construction",
        "deformation_dof": surface.deformation_dof(),
    }
    return ConditionReport(not bad, bad, stats, partial)


def check_thurston(surface: CellularSurface, weights: dict[int, float]) -> ConditionReport:
    """Classical conditions for weights in [0, pi/2]: three-edge sums
    below pi on face boundaries, four-edge sums below 2 pi on boundaries
    of unions of two adjacent faces."""
    if not surface.is_triangulation():
        raise NotATriangulation("the classical check is stated for triangulations")
    for e in surface.edges:
        if e not in weights:
            raise WeightOutOfRange(f"edge {e} has no weight")
        if not (0.0 <= weights[e] <= math.pi / 2):
            raise WeightOutOfRange(
                f"weight {weights[e]!r} on edge {e} outside [0, pi/2]"
            )
    bad: list[Violation] = []
    for f in sorted(surface.faces):
        s = sum(weights[d[0]] for d in surface.faces[f])
        if s >= math.pi:
            bad.append(Violation("three-edge-path", f"boundary of face {f}", s, math.pi))
    for e in sorted(surface.edges):
        f1 = surface.face_of((e, 1))
        f2 = surface.face_of((e, -1))
        if f1 == f2:
            continue
        shared = {d[0] for d in surface.faces[f1]} & {d[0] for d in surface.faces[f2]}
        if len(shared) != 1:
            continue  # two faces glued along several edges bound shorter walks
        ring = [d[0] for d in surface.faces[f1] + surface.faces[f2] if d[0] != e]
        s = sum(weights[x] for x in ring)
        if s >= TWO_PI:
            bad.append(
                Violation("four-edge-path", f"faces {f1}+{f2} across edge {e}", s, TWO_PI)
            )
    stats = {
        "family": "face boundaries and adjacent-face-pair boundaries",
        "deformation_dof": surface.deformation_dof(),
    }
    return ConditionReport(not bad, bad, stats)


def check_ideal(
    surface: CellularSurface, weights: dict[int, float], subset_bound: int = 12
) -> ConditionReport:
    """Conditions for ideal patterns: every face boundary sums exactly to
    (m - 2) pi, and the strict inequality holds on boundary walks of
    connected star closures that are not single face boundaries."""
    _require_weights(surface, weights, 0.0, math.pi, lo_open=True)
    bad: list[Violation] = []
    for f in sorted(surface.faces):
        m = len(surface.faces[f])
        s = sum(weights[d[0]] for d in surface.faces[f])
        target = (m - 2) * math.pi
        if abs(s - target) > 1e-12:
            bad.append(Violation("ideal-face-sum", f"face {f}", s, target))
    face_edge_multisets = {
        f: sorted(d[0] for d in surface.faces[f]) for f in surface.faces
    }
    checked = 0
    for v0 in connected_vertex_subsets(surface, subset_bound):
        checked += 1
        inc = _boundary_incidences(surface, v0)
        lhs = sum(weights[e] - math.pi for e, _ in inc)
        lhs += TWO_PI * star_closure(surface, v0).chi
        if lhs >= -1e-9:
            walk = sorted(e for e, _ in inc)
            if abs(lhs) <= 1e-9 and walk in face_edge_multisets.values():
                continue  # equality on a single face boundary is the exact case
            if lhs >= 0.0:
                bad.append(Violation("subset-inequality", _vset_name(v0), lhs, 0.0))
    partial = len(surface.vertices) > subset_bound
    stats = {
        "subsets_checked": checked,
        "subset_bound": subset_bound,
        "deformation_dof": surface.deformation_dof(),
    }
    return ConditionReport(not bad, bad, stats, partial)


def _vset_name(v0) -> str:
    return "{" + ",".join(str(v) for v in sorted(v0)) + "}"
