"""First-order set formulas with set parameters and de Bruijn binders.

Atoms are membership and equality between set expressions; a set expression
is a literal parameter, a bound variable (de Bruijn index counting binders
inward-out), or an ordered-pair former evaluated once its parts are
concrete.  Bounded quantifiers carry their bounding set as an expression.

Formulas are classified into a decidable fragment (membership, equality,
conjunction, disjunction, bounded quantifiers) and an approximate remainder
(implication, negation, unbounded quantifiers), whose defining conditions
range over infinite domains.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sets import (
    AnySet,
    LabeledRSet,
    ModelError,
    RSet,
    internal_pair,
    internal_pair_labeled,
    project,
)


# ---------------------------------------------------------------------------
# Set expressions


class SetExpr:
    pass


@dataclass(frozen=True)
class Param(SetExpr):
    value: AnySet


@dataclass(frozen=True)
class BVar(SetExpr):
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ModelError(f"binder index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class PairOf(SetExpr):
    left: SetExpr
    right: SetExpr


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    pass


@dataclass(frozen=True)
class Mem(Formula):
    element: SetExpr
    container: SetExpr


@dataclass(frozen=True)
class Eq(Formula):
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class BoundedExists(Formula):
    bound: SetExpr
    body: Formula  # binds BVar(0) in body


@dataclass(frozen=True)
class BoundedForall(Formula):
    bound: SetExpr
    body: Formula  # binds BVar(0) in body


@dataclass(frozen=True)
class Exists(Formula):
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    body: Formula


def mem(a: AnySet | SetExpr, b: AnySet | SetExpr) -> Mem:
    return Mem(as_expr(a), as_expr(b))


def eq(a: AnySet | SetExpr, b: AnySet | SetExpr) -> Eq:
    return Eq(as_expr(a), as_expr(b))


def as_expr(x: AnySet | SetExpr) -> SetExpr:
    if isinstance(x, SetExpr):
        return x
    return Param(x)


# ---------------------------------------------------------------------------
# Classification, instantiation, projection


def is_decidable(phi: Formula) -> bool:
    """Whether every verdict-relevant clause expands over finite data."""
    if isinstance(phi, (Mem, Eq)):
        return True
    if isinstance(phi, (And, Or)):
        return is_decidable(phi.left) and is_decidable(phi.right)
    if isinstance(phi, (BoundedExists, BoundedForall)):
        return is_decidable(phi.body)
    return False


def instantiate(phi: Formula, value: AnySet) -> Formula:
    """Replace BVar(0) with the value and shift deeper indices down."""
    return _inst_formula(phi, 0, value)


def _inst_expr(expr: SetExpr, depth: int, value: AnySet) -> SetExpr:
    if isinstance(expr, BVar):
        if expr.index == depth:
            return Param(value)
        if expr.index > depth:
            return BVar(expr.index - 1)
        return expr
    if isinstance(expr, PairOf):
        return PairOf(_inst_expr(expr.left, depth, value), _inst_expr(expr.right, depth, value))
    return expr


def _inst_formula(phi: Formula, depth: int, value: AnySet) -> Formula:
    if isinstance(phi, Mem):
        return Mem(_inst_expr(phi.element, depth, value), _inst_expr(phi.container, depth, value))
    if isinstance(phi, Eq):
        return Eq(_inst_expr(phi.left, depth, value), _inst_expr(phi.right, depth, value))
    if isinstance(phi, And):
        return And(_inst_formula(phi.left, depth, value), _inst_formula(phi.right, depth, value))
    if isinstance(phi, Or):
        return Or(_inst_formula(phi.left, depth, value), _inst_formula(phi.right, depth, value))
    if isinstance(phi, Implies):
        return Implies(
            _inst_formula(phi.antecedent, depth, value),
            _inst_formula(phi.consequent, depth, value),
        )
    if isinstance(phi, Not):
        return Not(_inst_formula(phi.body, depth, value))
    if isinstance(phi, BoundedExists):
        return BoundedExists(
            _inst_expr(phi.bound, depth, value), _inst_formula(phi.body, depth + 1, value)
        )
    if isinstance(phi, BoundedForall):
        return BoundedForall(
            _inst_expr(phi.bound, depth, value), _inst_formula(phi.body, depth + 1, value)
        )
    if isinstance(phi, Exists):
        return Exists(_inst_formula(phi.body, depth + 1, value))
    if isinstance(phi, Forall):
        return Forall(_inst_formula(phi.body, depth + 1, value))
    raise ModelError(f"unknown formula {phi!r}")


def resolve(expr: SetExpr) -> AnySet:
    """Evaluate a closed set expression to a concrete set."""
    if isinstance(expr, Param):
        return expr.value
    if isinstance(expr, PairOf):
        left = resolve(expr.left)
        right = resolve(expr.right)
        if isinstance(left, RSet) and isinstance(right, RSet):
            return internal_pair(left, right)
        if isinstance(left, LabeledRSet) and isinstance(right, LabeledRSet):
            return internal_pair_labeled(left, right)
        raise ModelError("pair former needs two sets of the same kind")
    raise ModelError(f"unbound variable {expr!r} in formula")


def project_formula(phi: Formula) -> Formula:
    """Replace every labeled parameter by its label-erased projection."""
    return _map_params(phi, lambda a: project(a) if isinstance(a, LabeledRSet) else a)


def _map_expr(expr: SetExpr, fn) -> SetExpr:
    if isinstance(expr, Param):
        return Param(fn(expr.value))
    if isinstance(expr, PairOf):
        return PairOf(_map_expr(expr.left, fn), _map_expr(expr.right, fn))
    return expr


def _map_params(phi: Formula, fn) -> Formula:
    if isinstance(phi, Mem):
        return Mem(_map_expr(phi.element, fn), _map_expr(phi.container, fn))
    if isinstance(phi, Eq):
        return Eq(_map_expr(phi.left, fn), _map_expr(phi.right, fn))
    if isinstance(phi, And):
        return And(_map_params(phi.left, fn), _map_params(phi.right, fn))
    if isinstance(phi, Or):
        return Or(_map_params(phi.left, fn), _map_params(phi.right, fn))
    if isinstance(phi, Implies):
        return Implies(_map_params(phi.antecedent, fn), _map_params(phi.consequent, fn))
    if isinstance(phi, Not):
        return Not(_map_params(phi.body, fn))
    if isinstance(phi, BoundedExists):
        return BoundedExists(_map_expr(phi.bound, fn), _map_params(phi.body, fn))
    if isinstance(phi, BoundedForall):
        return BoundedForall(_map_expr(phi.bound, fn), _map_params(phi.body, fn))
    if isinstance(phi, Exists):
        return Exists(_map_params(phi.body, fn))
    if isinstance(phi, Forall):
        return Forall(_map_params(phi.body, fn))
    raise ModelError(f"unknown formula {phi!r}")


def formula_params(phi: Formula) -> list[AnySet]:
    """All literal parameters, in no particular order."""
    out: list[AnySet] = []

    def expr_walk(expr: SetExpr) -> None:
        if isinstance(expr, Param):
            out.append(expr.value)
        elif isinstance(expr, PairOf):
            expr_walk(expr.left)
            expr_walk(expr.right)

    def walk(f: Formula) -> None:
        if isinstance(f, Mem):
            expr_walk(f.element)
            expr_walk(f.container)
        elif isinstance(f, Eq):
            expr_walk(f.left)
            expr_walk(f.right)
        elif isinstance(f, (And, Or)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, Implies):
            walk(f.antecedent)
            walk(f.consequent)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (BoundedExists, BoundedForall)):
            expr_walk(f.bound)
            walk(f.body)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body)

    walk(phi)
    return out
