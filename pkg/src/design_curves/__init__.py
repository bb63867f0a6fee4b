"""Weighted and approximate spherical t-design curves."""

from .assembly import (
    a_priori_eps,
    assemble,
    assemble_gamma,
    asymptotic_pipeline,
    build_mst,
    empirical_defect,
    overlap_bound,
    rescale_c,
    tree_constants,
)
from .design_sets import WeightedDesignSet, builtin_set, load_set, save_set, verify_weighted_design_set
from .hybrid import HybridDesign, gon_split_hybrid, konig_hybrid, verify_hybrid
from .polys import monomial_basis, monomial_sup, sphere_average
from .projective import (
    ProjectiveDesignSet,
    ProjPoint,
    builtin_projective,
    cp1_from_s2,
    cp_distance,
    fiber_average,
    fiber_curve,
    horizontal_lift,
    proj,
    s2_from_cp1,
    verify_projective_design,
)
from .report import DesignReport
from .sphere import (
    Arc,
    Curve,
    arclength_integral,
    arcs_intersect,
    assemble_cycle,
    curve_length,
    great_arc,
    is_simple,
    param_integral,
)
from .weighted import (
    PhaseFunction,
    RotationPath,
    build_wxm,
    explicit_s2,
    explicit_s3,
    lift_s3,
    smooth_curve,
    verify_weighted_curve,
)

__version__ = "0.1.0"
