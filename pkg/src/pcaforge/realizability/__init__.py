"""Finite-rank realizability models over the term algebra."""

from .checker import (
    APPROXIMATE,
    BUDGET,
    NOT_REALIZED,
    REALIZED,
    UNKNOWN,
    Verdict,
    check,
    check0_gamma,
    check0_ip,
    check_bounded_approx,
)
from .formulas import (
    And,
    BoundedExists,
    BoundedForall,
    BVar,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Mem,
    Not,
    Or,
    PairOf,
    Param,
    SetExpr,
    as_expr,
    eq,
    formula_params,
    instantiate,
    is_decidable,
    mem,
    project_formula,
    resolve,
)
from .realizers import (
    CappedRelationEntry,
    build_capped_relation,
    build_type2_composite,
    equality_realizers,
    key_collision_check,
    key_collision_realizer,
    max_atom_oracle,
    mv_function_realizer,
)
from .sets import (
    EMPTY,
    EMPTY_LABELED,
    AnySet,
    LabeledRSet,
    ModelError,
    NormalFilterSpec,
    RSet,
    canonical_numeral,
    canonical_numeral_labeled,
    graph_rset,
    graph_rset_labeled,
    has_oracle,
    internal_pair,
    internal_pair_labeled,
    is_completely_symmetric,
    is_partly_symmetric,
    label_all,
    lift_perm,
    lset,
    omega_truncation,
    omega_truncation_labeled,
    project,
    rank,
    rset,
    rset_perm,
    support,
    unordered_pair,
    unordered_pair_labeled,
    validate_injectively_presented,
)

__all__ = [name for name in dir() if not name.startswith("_")]
