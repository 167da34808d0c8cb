"""Von Neumann-Jordan constants of finite-dimensional p-normed spaces.

The sign-average functional of a vector tuple and the four constants it
induces (upper/lower, each plain or restricted to unit vectors): exact
closed forms where they exist, certified multistart/enumeration estimates
elsewhere, and verification suites tying the two together.
"""

from ._backend import BACKEND
from .analyze import (
    BConvexityResult,
    Check,
    CheckReport,
    NonLn1Result,
    b_convexity_scan,
    detect_non_ln1,
    duality_check,
    inequality_suite,
    reproduce_table,
)
from .closedforms import (
    ClosedFormValue,
    clarkson_cnj,
    haagerup_bp,
    identity_tuple_value,
    lanczos_gamma,
    lower_modified_lp,
    lower_nj_lp,
    rademacher_moment,
    upper_modified_lp,
    upper_nj_lp,
)
from .errors import (
    BudgetExceededError,
    CapExceededError,
    DegenerateInputError,
    DimensionMismatchError,
    DimensionPreconditionError,
    NjconstError,
    NoClosedFormError,
    UnsupportedExponentError,
    UnsupportedNormError,
)
from .functional import (
    evaluate_cn,
    evaluate_cn_batch,
    evaluate_cn_symmetrized,
    grad_cn,
    grad_cn_with_value,
    min_sign_combination,
    sign_patterns,
)
from .hadamard import (
    SignMatrix,
    apply_tn,
    extremal_linf_tuple,
    operator_norm_tn,
    sign_matrix,
)
from .optimize import (
    KINDS,
    ConstantEstimate,
    OptimizerConfig,
    enumerate_extreme,
    estimate_constant,
    local_search,
    local_search_ball,
    seeded_candidates,
)
from .spaces import (
    INF,
    SpaceSpec,
    conjugate_exponent,
    dual_space,
    extreme_points,
    norm,
    project_to_sphere,
    sample_sphere,
    tuple_l2X_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BConvexityResult",
    "BudgetExceededError",
    "CapExceededError",
    "Check",
    "CheckReport",
    "ClosedFormValue",
    "ConstantEstimate",
    "DegenerateInputError",
    "DimensionMismatchError",
    "DimensionPreconditionError",
    "INF",
    "KINDS",
    "NjconstError",
    "NoClosedFormError",
    "NonLn1Result",
    "OptimizerConfig",
    "SignMatrix",
    "SpaceSpec",
    "UnsupportedExponentError",
    "UnsupportedNormError",
    "apply_tn",
    "b_convexity_scan",
    "clarkson_cnj",
    "conjugate_exponent",
    "detect_non_ln1",
    "dual_space",
    "duality_check",
    "enumerate_extreme",
    "estimate_constant",
    "evaluate_cn",
    "evaluate_cn_batch",
    "evaluate_cn_symmetrized",
    "extremal_linf_tuple",
    "extreme_points",
    "grad_cn",
    "grad_cn_with_value",
    "haagerup_bp",
    "identity_tuple_value",
    "inequality_suite",
    "lanczos_gamma",
    "local_search",
    "local_search_ball",
    "lower_modified_lp",
    "lower_nj_lp",
    "min_sign_combination",
    "norm",
    "operator_norm_tn",
    "project_to_sphere",
    "rademacher_moment",
    "reproduce_table",
    "sample_sphere",
    "seeded_candidates",
    "sign_matrix",
    "sign_patterns",
    "tuple_l2X_norm",
    "upper_modified_lp",
    "upper_nj_lp",
]
