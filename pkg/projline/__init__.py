from .scalars import FieldContext, Scalar, scalar_arith, enumerate_scalars, nonzero_scalars
from .coordinate_line import (
    Vec2,
    ProjPoint,
    ScalarArrow,
    LabeledArrow,
    CoordinateLine,
    apply_arrow,
    compose,
    cross_ratio,
    cross_ratio_orbit,
    enumerate_points,
    parse_point,
)
from .abstract_line import (
    FiniteLine,
    AxiomReport,
    Violation,
    build_coordinate_model,
    coordinate_model,
    cross_ratio_abstract,
    minus_one_square_holds,
    verify_axioms,
    dump_line,
    load_line,
)
from .fundamental import (
    Projectivity,
    transport_projectivity,
    is_functorial,
    preserves_cross_ratios,
    triangle_criterion,
    uniqueness_census,
    coordinatize,
    criteria_disagreements,
    projectivity_group,
)
from .moebius import (
    Matrix2,
    ProjMatrix,
    INFINITY,
    act,
    induced_projectivity,
    matrix_of_projectivity,
    fractional_linear,
    enumerate_pgl,
)
from .punctured import Chart, chart, affine_combine, vector_add, vector_scale, basis_coordinate
from .bundles import (
    AffineAutomorphism,
    affine_cocycle,
    check_affine_cocycle,
    line_cocycle,
    gf3_unique_structure,
    gf3_all_permutations,
)
from .utils import seed_everything, default_projline_config, load_config
