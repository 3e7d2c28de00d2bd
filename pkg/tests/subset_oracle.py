"""Brute-force reimplementation of the solvability check, used as a test
oracle.  Deliberately shares no code with the package: plain mask
enumeration, BFS connectivity, direct cell counting."""

import math

TWO_PI = 2.0 * math.pi


def _tail(edges, dart):
    a, b = edges[dart[0]]
    return a if dart[1] > 0 else b


def closure_cells(edges, faces, corners_of, v0):
    """Open cells whose closure meets v0: (vertex set, edge set, face set)."""
    vs = set(v0)
    es = {e for e, (a, b) in edges.items() if a in vs or b in vs}
    fs = {f for f in faces if any(c in vs for c in corners_of[f])}
    return vs, es, fs


def closure_is_connected(edges, faces, corners_of, v0):
    vs, es, fs = closure_cells(edges, faces, corners_of, v0)
    cells = [("v", v) for v in vs] + [("e", e) for e in es] + [("f", f) for f in fs]
    if not cells:
        return False
    adj = {c: set() for c in cells}

    def link(x, y):
        adj[x].add(y)
        adj[y].add(x)

    for e in es:
        a, b = edges[e]
        if a in vs:
            link(("e", e), ("v", a))
        if b in vs:
            link(("e", e), ("v", b))
    for f in fs:
        for d in faces[f]:
            if d[0] in es:
                link(("f", f), ("e", d[0]))
        for c in corners_of[f]:
            if c in vs:
                link(("f", f), ("v", c))
    seen = {cells[0]}
    stack = [cells[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def brute_force_check(surface, weights):
    """All violations of the zero-curvature solvability conditions, as
    (kind, witness, lhs) triples, plus the number of subsets examined."""
    edges = dict(surface.edges)
    faces = {f: list(ds) for f, ds in surface.faces.items()}
    corners_of = {f: [_tail(edges, d) for d in ds] for f, ds in faces.items()}
    assert all(len(ds) == 3 for ds in faces.values())

    found = []
    for f in sorted(faces):
        s = sum(weights[d[0]] for d in faces[f])
        if s >= math.pi:
            names = ",".join(str(d[0]) for d in faces[f])
            found.append(("face-weight-sum", f"face {f} (edges {names})", s))

    verts = sorted(surface.vertices)
    n = len(verts)
    examined = 0
    for mask in range(1, 1 << n):
        v0 = {verts[i] for i in range(n) if mask >> i & 1}
        if not closure_is_connected(edges, faces, corners_of, v0):
            continue
        examined += 1
        vs, es, fs = closure_cells(edges, faces, corners_of, v0)
        chi = len(vs) - len(es) + len(fs)
        lhs = TWO_PI * chi
        for f in sorted(faces):
            ds = faces[f]
            cs = corners_of[f]
            for i in range(3):
                opp = ds[(i + 1) % 3][0]
                a, b = edges[opp]
                if cs[i] in v0 and a not in v0 and b not in v0:
                    lhs += weights[opp] - math.pi
        if lhs >= 0.0:
            name = "{" + ",".join(str(v) for v in sorted(v0)) + "}"
            found.append(("subset-inequality", name, lhs))
    return found, examined


def same_violations(report, brute, tol=1e-12):
    """True when a ConditionReport and a brute-force result list agree."""
    got = sorted((v.kind, v.witness, v.lhs) for v in report.violations)
    want = sorted(brute)
    if len(got) != len(want):
        return False
    return all(
        g[0] == w[0] and g[1] == w[1] and abs(g[2] - w[2]) <= tol
        for g, w in zip(got, want)
    )
