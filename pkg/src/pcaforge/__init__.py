"""Workbench for a combinatory term algebra with inert atoms and max-atom
oracle constants, budgeted innermost reduction, halting-profile stage
machines, and finite-rank realizability models over the resulting algebra.
"""

from .terms import (
    App,
    Atom,
    K,
    Oracle,
    Perm,
    S,
    Term,
    TermError,
    Var,
    app,
    apply_automorphism,
    atoms_of,
    is_closed,
    is_normal,
    perm_compose,
    perm_invert,
    print_term,
    subst,
    symbol_support,
    term_size,
)
from .reduction import (
    AppTree,
    BudgetExhausted,
    Leaf,
    Node,
    Reduced,
    Reducer,
    ReductionOutcome,
    denote,
    flatten,
    pca_apply,
    red,
    red_n,
    trace,
)
from .stdlib import (
    FALSE,
    FST,
    I,
    ISZERO,
    PAIR,
    PRED,
    SND,
    SUCC,
    TRUE,
    BoundedCase,
    Comp,
    PRFun,
    PrimRec,
    Proj,
    Succ,
    Zero,
    bracket_abstract,
    compile_primrec,
    eqnat_term,
    eval_prfun,
    fixpoint_y,
    fixpoint_yp,
    lam,
    nf,
    numeral,
    numeral_value,
    plug,
    std_env,
)
from .syntax import ParseError, parse, parse_perm, render

__version__ = "0.1.0"
