"""Circle patterns with prescribed intersection angles on closed
hyperbolic surfaces: local configurations, existence checks, curvature
solvers, disk layouts, and the cookie-cutter deformation pipeline."""

from .configurations import (
    InadmissibleWeights,
    RangeError,
    TriangleInequalityViolation,
    edge_length,
    r_from_u,
    three_circle_admissible,
    three_circle_angles,
    two_circle_angles,
    u_from_r,
)
from .deform import (
    CookiePacking,
    GluedProblem,
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
from .files import (
    ParseError,
    load_bundled_surface,
    parse_radii,
    parse_region,
    parse_surface,
    serialize_radii,
    serialize_surface,
)
from .hypgeo import DiskAutomorphism, HypCircle, align, hyp_circle_to_euclidean, hyp_distance
from .layout import (
    DiskLayout,
    ResidualTooLarge,
    develop,
    emit_svg,
    verify_ideal_incidence,
    verify_intersection_angles,
    verify_primitive_contact,
)
from .solver import (
    CheckFailed,
    DegenerationDetected,
    NonConvergence,
    PatternSolution,
    solve,
    solve_ideal,
)
from .surface import (
    CellularSurface,
    ConditionReport,
    check_ideal,
    check_origin_in_Y,
    check_thurston,
)

__version__ = "0.1.0"

__all__ = [
    "CellularSurface",
    "CheckFailed",
    "ConditionReport",
    "CookiePacking",
    "DegenerationDetected",
    "DiskAutomorphism",
    "DiskLayout",
    "GluedProblem",
    "GluingNotTriangular",
    "HypCircle",
    "InadmissibleWeights",
    "NonConvergence",
    "ParseError",
    "PatternSolution",
    "PlanarRegion",
    "RangeError",
    "RegionTooSmall",
    "ResidualTooLarge",
    "TriangleInequalityViolation",
    "align",
    "build_glued",
    "check_ideal",
    "check_origin_in_Y",
    "check_thurston",
    "cookie_cutter",
    "deform_solve",
    "develop",
    "edge_length",
    "emit_svg",
    "glue",
    "hyp_circle_to_euclidean",
    "hyp_distance",
    "load_bundled_surface",
    "parse_radii",
    "parse_region",
    "parse_surface",
    "r_from_u",
    "refinement_experiment",
    "region_from_points",
    "serialize_radii",
    "serialize_surface",
    "solve",
    "solve_ideal",
    "three_circle_admissible",
    "three_circle_angles",
    "two_circle_angles",
    "u_from_r",
    "verify_ideal_incidence",
    "verify_intersection_angles",
    "verify_primitive_contact",
    "__version__",
]
