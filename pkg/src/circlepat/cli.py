"""Command-line front end.

Exit codes: 0 success, 1 mathematical or verification failure, 2 bad
input (parse errors, invalid surfaces, missing files). All commands are
deterministic for fixed inputs, flags, and seed; output files are
written atomically.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import deform, files, layout, properties, solver
from .solver import PatternSolution
from .surface import check_ideal, check_origin_in_Y, check_thurston

PARSE_ERROR = 2
MATH_ERROR = 1


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_surface(path: str):
    text = Path(path).read_text()
    surface, weights = files.parse_surface(text)
    return surface, weights


def _print_structure(surface) -> None:
    report = surface.validate()
    stats = dict(report.stats)
    stats["2|E|-3|F|"] = 2 * len(surface.edges) - 3 * len(surface.faces)
    print(f"surface {surface.name}")
    for k in sorted(stats):
        print(f"  {k} = {stats[k]}")


def cmd_check(args) -> int:
    try:
        surface, weights = _load_surface(args.surface)
    except (OSError, files.ParseError) as exc:
        return _fail(PARSE_ERROR, str(exc))
    _print_structure(surface)
    report = surface.validate()
    if not report.passed:
        print("structure: " + report.summary())
        return PARSE_ERROR
    print("structure: pass")
    try:
        if args.mode == "thurston":
            cond = check_thurston(surface, weights)
        elif args.mode == "ideal":
            cond = check_ideal(surface, weights, subset_bound=args.subset_bound)
        else:
            cond = check_origin_in_Y(surface, weights, subset_bound=args.subset_bound)
    except ValueError as exc:
        return _fail(MATH_ERROR, f"{args.mode} conditions inapplicable: {exc}")
    print(f"{args.mode} conditions: " + cond.summary())
    return 0 if cond.passed else MATH_ERROR


def _read_init(path: str, surface) -> dict[int, float]:
    name, _, radii = files.parse_radii(Path(path).read_text())
    missing = [v for v in surface.vertices if v not in radii]
    if missing:
        raise files.ParseError(
            f"radii file {path} (surface {name}) lacks vertices {missing[:6]}"
        )
    return radii


def cmd_solve(args) -> int:
    try:
        surface, weights = _load_surface(args.surface)
        if not surface.validate().passed:
            return _fail(PARSE_ERROR, f"{args.surface} is not a valid surface")
        init = _read_init(args.init, surface) if args.init else None
    except (OSError, files.ParseError) as exc:
        return _fail(PARSE_ERROR, str(exc))
    run = solver.solve_ideal if args.ideal else solver.solve
    try:
        sol = run(surface, weights, init=init, tol=args.tol,
                  max_iter=args.max_iter, force=args.force)
    except solver.CheckFailed as exc:
        print("conditions not met:\n" + exc.report.summary())
        return MATH_ERROR
    except (solver.NonConvergence, solver.DegenerationDetected) as exc:
        return _fail(MATH_ERROR, f"{type(exc).__name__}: {exc}")
    except ValueError as exc:
        return _fail(MATH_ERROR, f"refused: {exc}")
    print(f"solved {surface.name}: {sol.iterations} iterations, "
          f"residual {sol.residual:.3e}")
    if args.output:
        files.write_text_atomic(
            args.output,
            files.serialize_radii(surface.name, sol.residual, sol.radii),
        )
        print(f"wrote {args.output}")
    return 0


def cmd_layout(args) -> int:
    try:
        surface, weights = _load_surface(args.surface)
        if not surface.validate().passed:
            return _fail(PARSE_ERROR, f"{args.surface} is not a valid surface")
        name, residual, radii = files.parse_radii(Path(args.radii).read_text())
    except (OSError, files.ParseError) as exc:
        return _fail(PARSE_ERROR, str(exc))
    extra = [v for v in surface.vertices if v not in radii]
    if extra or len(radii) != len(surface.vertices):
        return _fail(
            PARSE_ERROR,
            f"radii file {args.radii} covers {len(radii)} vertices, "
            f"surface {surface.name} has {len(surface.vertices)}",
        )
    mode = "triangulated" if surface.is_triangulation() else "ideal"
    sol = PatternSolution(
        radii=radii, residual=residual, corner_angles={}, iterations=0,
        mode=mode, surface_name=name,
    )
    try:
        lay = layout.develop(surface, weights, sol)
    except layout.ResidualTooLarge as exc:
        return _fail(MATH_ERROR, str(exc))
    print(f"layout {surface.name} ({mode}): {len(lay.circles)} circles, "
          f"{len(lay.tree_edges)} tree edges")
    print(f"  holonomy residual = {lay.holonomy_residual:.3e}")
    print(f"  edge defect = {lay.edge_defect:.3e}")
    ok = lay.holonomy_residual <= 1e-7
    angles = layout.verify_intersection_angles(lay, weights)
    print("  intersection angles: " + angles.summary())
    ok = ok and angles.passed
    contact = layout.verify_primitive_contact(lay)
    print("  primitive contact: " + contact.summary())
    ok = ok and contact.passed
    if mode == "ideal":
        incidence = layout.verify_ideal_incidence(lay)
        print("  ideal incidence: " + incidence.summary())
        ok = ok and incidence.passed
    if args.output:
        files.write_text_atomic(
            args.output, layout.emit_svg(lay, labels=args.labels, shade=args.shade)
        )
        print(f"wrote {args.output}")
    return 0 if ok else MATH_ERROR


def _load_regions(directory: str) -> dict[int, deform.PlanarRegion]:
    paths = sorted(Path(directory).glob("*.region"))
    regions: dict[int, deform.PlanarRegion] = {}
    for p in paths:
        face, corners = files.parse_region(p.read_text())
        if face in regions:
            raise files.ParseError(f"{p}: duplicate region for face {face}")
        regions[face] = deform.region_from_points(corners)
    return regions


def cmd_deform(args) -> int:
    try:
        surface, weights = _load_surface(args.surface)
        if not surface.validate().passed:
            return _fail(PARSE_ERROR, f"{args.surface} is not a valid surface")
        regions = _load_regions(args.regions)
    except (OSError, files.ParseError, ValueError) as exc:
        return _fail(PARSE_ERROR, str(exc))
    uncovered = [
        f for f, darts in sorted(surface.faces.items())
        if len(darts) != 3 and f not in regions
    ]
    if uncovered:
        return _fail(PARSE_ERROR, f"no region file for non-triangular faces {uncovered}")
    unknown = [f for f in regions if f not in surface.faces]
    if unknown:
        return _fail(PARSE_ERROR, f"region files name unknown faces {sorted(unknown)}")

    if args.refine:
        try:
            ns = [int(x) for x in args.refine.split(",")]
        except ValueError:
            return _fail(PARSE_ERROR, f"bad --refine list {args.refine!r}")
        if any(not 2 <= n <= 64 for n in ns) or len(ns) < 2:
            return _fail(PARSE_ERROR, "--refine needs at least two n in [2, 64]")
        try:
            report = deform.refinement_experiment(
                surface, weights, regions, ns, tol=args.tol,
                subset_bound=args.subset_bound,
            )
        except (deform.RegionTooSmall, deform.GluingNotTriangular,
                solver.CheckFailed, solver.NonConvergence,
                solver.DegenerationDetected) as exc:
            return _fail(MATH_ERROR, f"refinement, {type(exc).__name__}: {exc}")
        text = report.table()
        print(text, end="")
        print(f"successive differences decreasing: {report.diffs_decreasing()}")
        out = f"{args.output}_refine.txt"
        files.write_text_atomic(out, text)
        print(f"wrote {out}")
        return 0

    if not 2 <= args.n <= 64:
        return _fail(PARSE_ERROR, f"-n must be in [2, 64], got {args.n}")
    try:
        glued = deform.build_glued(surface, weights, regions, args.n)
    except (deform.RegionTooSmall, deform.GluingNotTriangular, ValueError) as exc:
        return _fail(MATH_ERROR, f"gluing, {type(exc).__name__}: {exc}")
    try:
        full, _ = deform.deform_solve(
            surface, weights, regions, args.n, tol=args.tol,
            subset_bound=args.subset_bound, glued=glued,
        )
    except solver.CheckFailed as exc:
        print("conditions not met on the glued surface:\n" + exc.report.summary())
        return MATH_ERROR
    except (solver.NonConvergence, solver.DegenerationDetected) as exc:
        return _fail(MATH_ERROR, f"solve, {type(exc).__name__}: {exc}")
    print(f"glued {surface.name} at n={args.n}: "
          f"{len(glued.surface.vertices)} vertices, "
          f"{full.iterations} iterations, residual {full.residual:.3e}")
    print(f"  min radius = {min(full.radii.values()):.6g}")
    lay = layout.develop(glued.surface, glued.weights, full)
    print(f"  holonomy residual = {lay.holonomy_residual:.3e}")
    base = args.output
    files.write_text_atomic(
        f"{base}.surface", files.serialize_surface(glued.surface, glued.weights)
    )
    files.write_text_atomic(
        f"{base}.radii",
        files.serialize_radii(glued.surface.name, full.residual, full.radii),
    )
    files.write_text_atomic(f"{base}.svg", layout.emit_svg(lay))
    print(f"wrote {base}.surface {base}.radii {base}.svg")
    return 0


def cmd_verify(args) -> int:
    names = list(properties.SUITES) if args.suite == "all" else [args.suite]
    results = properties.run_suites(names, args.trials, args.seed)
    print(f"verify: suites={','.join(names)} trials={args.trials} seed={args.seed}")
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    return 0 if not failed else MATH_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circlepat",
        description="Hyperbolic circle patterns: check, solve, draw, deform.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a surface file and run solvability conditions")
    p.add_argument("surface")
    p.add_argument("--subset-bound", type=int, default=12)
    p.add_argument("--mode", choices=["thurston", "general", "ideal"], default="general")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve for the radii of a pattern")
    p.add_argument("surface")
    p.add_argument("--tol", type=float, default=solver.DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--init", help="radii file used as the starting point")
    p.add_argument("--ideal", action="store_true")
    p.add_argument("--force", action="store_true",
                   help="solve even when the conditions checker fails")
    p.add_argument("-o", "--output", help="radii file to write")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("layout", help="develop a solved pattern and emit SVG")
    p.add_argument("surface")
    p.add_argument("--radii", required=True)
    p.add_argument("-o", "--output", help="SVG file to write")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--shade", action="store_true")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("deform", help="glue packings into faces and solve")
    p.add_argument("surface")
    p.add_argument("--regions", required=True, help="directory of .region files")
    p.add_argument("-n", type=int, default=4, help="packing fineness, disks of radius 1/n")
    p.add_argument("--refine", help="comma list of n values for a convergence report")
    p.add_argument("--tol", type=float, default=solver.DEFAULT_TOL)
    p.add_argument("--subset-bound", type=int, default=4)
    p.add_argument("-o", "--output", default="deformed", help="output path prefix")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", choices=["config", "solver", "layout", "all"], default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
