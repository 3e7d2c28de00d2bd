"""Curvature maps and the Newton/flow solver driving all vertex
curvatures to zero.

Everything iterates in u = log tanh(r/2): the Jacobian is symmetric
positive definite there, so damped Newton steps with a norm decrease
test converge globally, with an explicit curvature-flow step as
fallback when a Newton trial is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .configurations import (
    RangeError,
    TriangleInequalityViolation,
    angle_gradient_u,
    r_from_u,
    three_circle_angles,
    two_circle_angles,
    two_circle_gradient_u,
    u_from_r,
)
from .surface import CellularSurface, check_ideal, check_origin_in_Y

TWO_PI = 2.0 * math.pi
U_FLOOR = -30.0
U_CAP = u_from_r(40.0)
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200


class NonConvergence(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"no convergence after {iterations} iterations, residual {residual:.3e}")
        self.iterations = iterations
        self.residual = residual


class DegenerationDetected(RuntimeError):
    """Some radius ran into the floor (disk shrinking to a point) or the
    cap (disk blowing up); carries the offending vertex set."""

    def __init__(self, vertices: set, bound: str):
        super().__init__(f"degeneration at vertices {sorted(vertices)} ({bound})")
        self.vertices = set(vertices)
        self.bound = bound


class CheckFailed(ValueError):
    """Solvability precondition rejected; carries the checker report."""

    def __init__(self, report):
        super().__init__("solvability check failed:\n" + report.summary())
        self.report = report


@dataclass
class PatternSolution:
    radii: dict[int, float]
    residual: float
    corner_angles: dict[tuple[int, int], float]
    iterations: int
    mode: str
    surface_name: str = ""


# -- curvature in triangulated mode ---------------------------------------


def _face_pattern(surface: CellularSurface):
    """Per face: corner vertices and the weight on the edge opposite each
    corner."""
    pattern = []
    for f in sorted(surface.faces):
        darts = surface.faces[f]
        corners = tuple(surface.tail(d) for d in darts)
        opp_edges = tuple(darts[(k + 1) % 3][0] for k in range(3))
        pattern.append((f, corners, opp_edges))
    return pattern


def corner_angles(surface: CellularSurface, weights: dict[int, float],
                  radii: dict[int, float]) -> dict[tuple[int, int], float]:
    """Inner angle at each (face id, corner position)."""
    out: dict[tuple[int, int], float] = {}
    for f, corners, opp in _face_pattern(surface):
        rr = tuple(radii[v] for v in corners)
        tt = tuple(weights[e] for e in opp)
        try:
            angles = three_circle_angles(rr, tt)
        except TriangleInequalityViolation as exc:
            raise TriangleInequalityViolation(f"face {f}: {exc}") from None
        for k in range(3):
            out[(f, k)] = angles[k]
    return out


def curvature(surface: CellularSurface, weights: dict[int, float],
              radii: dict[int, float]) -> dict[int, float]:
    """k(v) = 2 pi minus the sum of inner angles incident at v."""
    sigma = {v: 0.0 for v in surface.vertices}
    for f, corners, opp in _face_pattern(surface):
        rr = tuple(radii[v] for v in corners)
        tt = tuple(weights[e] for e in opp)
        try:
            angles = three_circle_angles(rr, tt)
        except TriangleInequalityViolation as exc:
            raise TriangleInequalityViolation(f"face {f}: {exc}") from None
        for v, a in zip(corners, angles):
            sigma[v] += a
    return {v: TWO_PI - s for v, s in sigma.items()}


def curvature_jacobian_u(surface: CellularSurface, weights: dict[int, float],
                         u: dict[int, float]) -> sp.csr_matrix:
    """d k(v) / d u(w), rows and columns in surface.vertices order.

    Symmetric, positive diagonal, nonpositive off-diagonal, positive row
    sums: positive definite.
    """
    index = {v: i for i, v in enumerate(surface.vertices)}
    radii = {v: r_from_u(u[v]) for v in surface.vertices}
    rows, cols, vals = [], [], []
    for f, corners, opp in _face_pattern(surface):
        rr = tuple(radii[v] for v in corners)
        tt = tuple(weights[e] for e in opp)
        g = angle_gradient_u(rr, tt)
        for a in range(3):
            ia = index[corners[a]]
            for b in range(3):
                rows.append(ia)
                cols.append(index[corners[b]])
                vals.append(-g[a, b])
    n = len(surface.vertices)
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


# -- curvature in ideal mode ----------------------------------------------


def ideal_corner_angles(surface: CellularSurface, weights: dict[int, float],
                        radii: dict[int, float]) -> dict[tuple[int, int], float]:
    """Angle of the face at each corner: the fan around the face's common
    point splits it into one triangle per side, two of which meet at each
    corner."""
    out: dict[tuple[int, int], float] = {}
    half: dict[tuple[int, int], float] = {}

    def half_angle(v: int, e: int) -> float:
        key = (v, e)
        if key not in half:
            a, b = surface.edges[e]
            th = two_circle_angles(radii[a], radii[b], weights[e])
            half[(a, e)] = th[0]
            half[(b, e)] = th[1]
        return half[key]

    for f in sorted(surface.faces):
        darts = surface.faces[f]
        m = len(darts)
        for i in range(m):
            v = surface.tail(darts[i])
            e_prev = darts[i - 1][0]
            e_next = darts[i][0]
            out[(f, i)] = half_angle(v, e_prev) + half_angle(v, e_next)
    return out


def ideal_curvature(surface: CellularSurface, weights: dict[int, float],
                    radii: dict[int, float]) -> dict[int, float]:
    """k(v) = 2 pi - 2 * sum over incident edges of the center angle at v
    toward the intersection point; each edge borders two faces, hence the
    factor 2."""
    sigma = {v: 0.0 for v in surface.vertices}
    for e in sorted(surface.edges):
        a, b = surface.edges[e]
        th_a, th_b = two_circle_angles(radii[a], radii[b], weights[e])
        sigma[a] += 2.0 * th_a
        sigma[b] += 2.0 * th_b
    return {v: TWO_PI - s for v, s in sigma.items()}


def ideal_jacobian_u(surface: CellularSurface, weights: dict[int, float],
                     u: dict[int, float]) -> sp.csr_matrix:
    index = {v: i for i, v in enumerate(surface.vertices)}
    radii = {v: r_from_u(u[v]) for v in surface.vertices}
    rows, cols, vals = [], [], []
    for e in sorted(surface.edges):
        a, b = surface.edges[e]
        g = two_circle_gradient_u(radii[a], radii[b], weights[e])
        ia, ib = index[a], index[b]
        for (p, q), val in np.ndenumerate(g):
            rows.append(ia if p == 0 else ib)
            cols.append(ia if q == 0 else ib)
            vals.append(-2.0 * val)
    n = len(surface.vertices)
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


# -- Newton driver ---------------------------------------------------------


def _drive(vs: list[int], u0: np.ndarray, eval_k, eval_jac, tol: float,
           max_iter: int) -> tuple[np.ndarray, np.ndarray, int]:
    u = u0.copy()
    k = eval_k(u)
    res = float(np.max(np.abs(k)))
    done = 0
    for _ in range(max_iter):
        if res <= tol:
            break
        ss = float(k @ k)
        du = spla.spsolve(eval_jac(u).tocsc(), k)
        trial = None
        alpha = 1.0
        while alpha >= 1e-4:
            cand = u - alpha * du
            kt = _try_eval(eval_k, cand)
            if kt is not None and float(kt @ kt) <= (1.0 - 1e-4 * alpha) * ss:
                trial = (cand, kt)
                break
            alpha *= 0.5
        if trial is None:
            step = 0.1 / max(1.0, res)
            cand = u - step * k
            _bounds_or_raise(vs, cand)
            kt = eval_k(cand)
            trial = (cand, kt)
        u, k = trial
        res = float(np.max(np.abs(k)))
        done += 1
        _bounds_or_raise(vs, u)
    if res > tol:
        raise NonConvergence(done, res)
    # polish: full Newton steps squeeze the residual to machine noise, so
    # solutions from different initializations or labelings coincide
    for _ in range(3):
        if res <= 1e-15:
            break
        du = spla.spsolve(eval_jac(u).tocsc(), k)
        cand = u - du
        kt = _try_eval(eval_k, cand)
        if kt is None:
            break
        res_t = float(np.max(np.abs(kt)))
        if res_t >= res:
            break
        u, k, res = cand, kt, res_t
    return u, k, done


def _try_eval(eval_k, u: np.ndarray):
    if np.any(u >= U_CAP) or np.any(u <= U_FLOOR):
        return None
    try:
        return eval_k(u)
    except (TriangleInequalityViolation, RangeError):
        return None


def _bounds_or_raise(vs: list[int], u: np.ndarray) -> None:
    low = {vs[i] for i in np.nonzero(u <= U_FLOOR)[0]}
    if low:
        raise DegenerationDetected(low, "radius floor")
    high = {vs[i] for i in np.nonzero(u >= U_CAP)[0]}
    if high:
        raise DegenerationDetected(high, "radius cap")


def _initial_u(vs: list[int], init: dict[int, float] | None) -> np.ndarray:
    if init is None:
        return np.full(len(vs), u_from_r(1.0))
    missing = [v for v in vs if v not in init]
    if missing:
        raise ValueError(f"initial radii missing vertices {missing}")
    return np.array([u_from_r(init[v]) for v in vs])


def solve(surface: CellularSurface, weights: dict[int, float],
          init: dict[int, float] | None = None, tol: float = DEFAULT_TOL,
          max_iter: int = DEFAULT_MAX_ITER, force: bool = False) -> PatternSolution:
    """Radii with zero curvature at every vertex of a triangulation.

    Refuses weights failing the solvability check unless force is given;
    raises NonConvergence or DegenerationDetected when iteration fails,
    which with force is the expected outcome for unsolvable weights.
    """
    if not force:
        report = check_origin_in_Y(surface, weights)
        if not report.passed:
            raise CheckFailed(report)
    vs = surface.vertices
    pattern = _face_pattern(surface)
    index = {v: i for i, v in enumerate(vs)}
    tri = [
        (tuple(index[v] for v in corners), tuple(weights[e] for e in opp))
        for _, corners, opp in pattern
    ]

    def eval_k(u: np.ndarray) -> np.ndarray:
        r = [r_from_u(x) for x in u]
        k = np.full(len(vs), TWO_PI)
        for iv, tt in tri:
            angles = three_circle_angles((r[iv[0]], r[iv[1]], r[iv[2]]), tt)
            for i, a in zip(iv, angles):
                k[i] -= a
        return k

    def eval_jac(u: np.ndarray) -> sp.csr_matrix:
        return curvature_jacobian_u(surface, weights, dict(zip(vs, u)))

    u, k, done = _drive(vs, _initial_u(vs, init), eval_k, eval_jac, tol, max_iter)
    radii = {v: r_from_u(x) for v, x in zip(vs, u)}
    return PatternSolution(
        radii=radii,
        residual=float(np.max(np.abs(k))),
        corner_angles=corner_angles(surface, weights, radii),
        iterations=done,
        mode="triangulated",
        surface_name=surface.name,
    )


def solve_ideal(surface: CellularSurface, weights: dict[int, float],
                init: dict[int, float] | None = None, tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER, force: bool = False) -> PatternSolution:
    """Radii making all faces close up around common intersection points."""
    if not force:
        report = check_ideal(surface, weights)
        if not report.passed:
            raise CheckFailed(report)
    vs = surface.vertices
    index = {v: i for i, v in enumerate(vs)}
    pairs = [(index[a], index[b], weights[e])
             for e, (a, b) in sorted(surface.edges.items())]

    def eval_k(u: np.ndarray) -> np.ndarray:
        r = [r_from_u(x) for x in u]
        k = np.full(len(vs), TWO_PI)
        for ia, ib, th in pairs:
            ta, tb = two_circle_angles(r[ia], r[ib], th)
            k[ia] -= 2.0 * ta
            k[ib] -= 2.0 * tb
        return k

    def eval_jac(u: np.ndarray) -> sp.csr_matrix:
        return ideal_jacobian_u(surface, weights, dict(zip(vs, u)))

    u, k, done = _drive(vs, _initial_u(vs, init), eval_k, eval_jac, tol, max_iter)
    radii = {v: r_from_u(x) for v, x in zip(vs, u)}
    return PatternSolution(
        radii=radii,
        residual=float(np.max(np.abs(k))),
        corner_angles=ideal_corner_angles(surface, weights, radii),
        iterations=done,
        mode="ideal",
        surface_name=surface.name,
    )
