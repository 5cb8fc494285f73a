"""Numerical laboratory for isometric liftings, dilations, and m-isometries."""

from .errors import (
    BudgetError,
    ConvergenceError,
    EmbeddingMarginError,
    GrowthDivergenceError,
    InputValidationError,
    IntertwiningError,
    MuTooSmallError,
    NotContractionError,
    NotConvexError,
    NotPSDError,
    PowerBoundError,
)
from .numerics import (
    EPS_NUM,
    TOL_DKW,
    adjoint,
    dkw_complete,
    herm_eig,
    op_norm,
    pinv_sqrt,
    psd_sqrt,
)
from .operators import (
    EmbeddingMap,
    Operator,
    RelationReport,
    check_dilation,
    check_lifting,
    from_blocks,
    inclusion_embedding,
    interior_dim,
    make_weighted_shift,
    operator_from_dict,
    operator_to_dict,
)
from .defect import (
    Classification,
    DefectReport,
    GrowthReport,
    classify,
    defect_operator,
    growth_constant,
    growth_linear,
    is_m_isometric,
    min_isometry_order,
)
from .shiftlift import (
    DilationCertificate,
    LiftingCertificate,
    ShiftLiftPlan,
    build_bilateral_dilation,
    build_shift_lift,
    plan_shift_lift,
    solve_embedding,
)
from .convexlift import (
    ConvexLiftCertificate,
    FeasibilityResult,
    TowerResult,
    a_t_limit,
    build_convex_lift,
    convex_defect,
    iterate_tower,
    lmi_feasibility,
    one_step_lift,
    tower_operator,
)
from .vnfoguel import (
    CommutantLift,
    FoguelHankelCertificate,
    FoguelSpec,
    commutant_lift,
    ergodic_diagnostic,
    extremal_shift,
    foguel_hankel_lift,
    foguel_operator,
    foguel_power_report,
    hankel_from_symbol,
    poly_eval,
    polybound_trend,
    schaffer_lifting,
    sup_grid,
    unitary_extension_dilation,
    vn_check,
)

__version__ = "0.1.0"
