"""Clause-by-clause realizability checking on the finite fragments.

Three relations share this module:

* ``check`` — the plain relation on finite-rank sets.
* ``check0_gamma`` — the labeled relation: membership and the bounded
  existential range over 0-labelled entries only, and equality and bounded
  universals carry an extra conjunct at the plain level with every
  parameter replaced by its label-erased projection.
* ``check0_ip`` — identical to ``check`` on the decidable fragment once all
  parameters are validated injectively presented (which is the point of
  that model: bounded clauses need no adjustment there).

Verdicts are three-valued.  ``Realized``/``NotRealized`` are emitted only
when the clause expansion fully decided the matter; every algebra
application runs under the caller's budget and an exhausted application
yields ``Unknown(budget)``.  Implication, negation, and the unbounded
quantifiers have defining conditions ranging over infinite domains;
``check`` reports them ``Unknown(approximate-fragment)``, and
``check_bounded_approx`` refines that by searching finite candidate and
universe sets — soundly, so it can refute but never affirm.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..reduction import Reducer, red
from ..stdlib import FST, SND, numeral
from ..terms import App, Term
from .formulas import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Mem,
    Not,
    Or,
    SetExpr,
    instantiate,
    formula_params,
    project_formula,
    resolve,
)
from .sets import (
    AnySet,
    LabeledRSet,
    ModelError,
    RSet,
    project,
    rank,
    validate_injectively_presented,
)

REALIZED = "realized"
NOT_REALIZED = "not-realized"
UNKNOWN = "unknown"

BUDGET = "budget"
APPROXIMATE = "approximate-fragment"


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str | None = None
    detail: str | None = None

    @property
    def realized(self) -> bool:
        return self.status == REALIZED

    @property
    def not_realized(self) -> bool:
        return self.status == NOT_REALIZED

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN

    def __str__(self) -> str:
        if self.status == UNKNOWN:
            return f"UNKNOWN({self.reason}, {self.detail})"
        return "REALIZED" if self.realized else "NOT-REALIZED"


_REALIZED = Verdict(REALIZED)
_NOT_REALIZED = Verdict(NOT_REALIZED)


def _budget(cap: int, what: str) -> Verdict:
    return Verdict(UNKNOWN, BUDGET, f"{what} within cap {cap}")


def _approx(detail: str) -> Verdict:
    return Verdict(UNKNOWN, APPROXIMATE, detail)


def _conj(verdicts) -> Verdict:
    """All must hold: one refutation refutes, else any unknown blurs."""
    blur: Verdict | None = None
    for v in verdicts:
        if v.not_realized:
            return v
        if v.unknown and blur is None:
            blur = v
    return blur or _REALIZED


def _disj(verdicts) -> Verdict:
    """A witness suffices: one success decides, else any unknown blurs."""
    blur: Verdict | None = None
    for v in verdicts:
        if v.realized:
            return v
        if v.unknown and blur is None:
            blur = v
    return blur or _NOT_REALIZED


class _Ctx:
    """One check run: reducer, budget, active relation, and a memo.

    The two atomic relations are functions of (realizer, left, right) once
    the budget and reducer are fixed, and shared substructure (canonical
    numerals especially) repeats the same triple exponentially often, so
    results are memoized per run.
    """

    __slots__ = ("cap", "reducer", "labeled", "memo", "_plain")

    def __init__(self, cap: int, reducer: Reducer | None, labeled: bool) -> None:
        self.cap = cap
        self.reducer = reducer
        self.labeled = labeled
        self.memo: dict[tuple, Verdict] = {}
        self._plain: "_Ctx | None" = None

    def apply(self, f: Term, x: Term) -> Term | None:
        return red(App(f, x), self.cap, self.reducer).value_or_none()

    def proj(self, e: Term, which: Term) -> Term | None:
        return self.apply(which, e)

    def plain(self) -> "_Ctx":
        if not self.labeled:
            return self
        if self._plain is None:
            self._plain = _Ctx(self.cap, self.reducer, labeled=False)
        return self._plain


def _resolve_plain(expr: SetExpr) -> RSet:
    value = resolve(expr)
    if not isinstance(value, RSet):
        raise ModelError("this relation expects plain (unlabeled) parameters")
    return value


def _resolve_labeled(expr: SetExpr) -> LabeledRSet:
    value = resolve(expr)
    if not isinstance(value, LabeledRSet):
        raise ModelError("the labeled relation expects labeled parameters")
    return value


# ---------------------------------------------------------------------------
# The plain relation


def check(e: Term, phi: Formula, cap: int, reducer: Reducer | None = None) -> Verdict:
    """Does e realize phi in the plain model, within the budget?"""
    if not e.normal:
        raise ModelError("realizers must be normal forms")
    return _check(_Ctx(cap, reducer, labeled=False), e, phi)


def _check(ctx: _Ctx, e: Term, phi: Formula) -> Verdict:
    if isinstance(phi, Mem):
        if ctx.labeled:
            a0, b0 = _resolve_labeled(phi.element), _resolve_labeled(phi.container)
            return _mem0(ctx, e, a0, b0, 1, _atom_depth_limit(a0, b0))
        a, b = _resolve_plain(phi.element), _resolve_plain(phi.container)
        return _mem(ctx, e, a, b, 1, _atom_depth_limit(a, b))
    if isinstance(phi, Eq):
        if ctx.labeled:
            a0, b0 = _resolve_labeled(phi.left), _resolve_labeled(phi.right)
            return _eq0(ctx, e, a0, b0, 1, _atom_depth_limit(a0, b0))
        a, b = _resolve_plain(phi.left), _resolve_plain(phi.right)
        return _eq(ctx, e, a, b, 1, _atom_depth_limit(a, b))
    if isinstance(phi, And):
        e0 = ctx.proj(e, FST)
        e1 = ctx.proj(e, SND)
        if e0 is None or e1 is None:
            return _budget(ctx.cap, "projection of the realizer did not reduce")
        return _conj((_check(ctx, e0, phi.left), _check(ctx, e1, phi.right)))
    if isinstance(phi, Or):
        e0 = ctx.proj(e, FST)
        e1 = ctx.proj(e, SND)
        if e0 is None or e1 is None:
            return _budget(ctx.cap, "projection of the realizer did not reduce")
        if e0 == numeral(0):
            return _check(ctx, e1, phi.left)
        if e0 == numeral(1):
            return _check(ctx, e1, phi.right)
        return _NOT_REALIZED
    if isinstance(phi, BoundedExists):
        e0 = ctx.proj(e, FST)
        e1 = ctx.proj(e, SND)
        if e0 is None or e1 is None:
            return _budget(ctx.cap, "projection of the realizer did not reduce")
        if ctx.labeled:
            bound = _resolve_labeled(phi.bound)
            picks = [
                _check(ctx, e1, instantiate(phi.body, b))
                for s, k, b in bound
                if s == 0 and k == e0
            ]
        else:
            bound_p = _resolve_plain(phi.bound)
            picks = [
                _check(ctx, e1, instantiate(phi.body, b)) for k, b in bound_p if k == e0
            ]
        return _disj(picks)
    if isinstance(phi, BoundedForall):
        if ctx.labeled:
            bound = _resolve_labeled(phi.bound)
            parts = []
            for s, f, b in bound:
                if s != 0:
                    continue
                w = ctx.apply(e, f)
                if w is None:
                    return _budget(ctx.cap, "application to a member key did not reduce")
                parts.append(_check(ctx, w, instantiate(phi.body, b)))
            parts.append(_plain_side(ctx, e, BoundedForall(phi.bound, phi.body)))
            return _conj(parts)
        bound_p = _resolve_plain(phi.bound)
        parts = []
        for f, b in bound_p:
            w = ctx.apply(e, f)
            if w is None:
                return _budget(ctx.cap, "application to a member key did not reduce")
            parts.append(_check(ctx, w, instantiate(phi.body, b)))
        return _conj(parts)
    if isinstance(phi, Implies):
        return _approx("implication ranges over all realizers")
    if isinstance(phi, Not):
        return _approx("negation ranges over all realizers")
    if isinstance(phi, Exists):
        return _approx("unbounded existential ranges over the whole model")
    if isinstance(phi, Forall):
        return _approx("unbounded universal ranges over the whole model")
    raise ModelError(f"unknown formula {phi!r}")


def _atom_depth_limit(a: AnySet, b: AnySet) -> int:
    # The membership/equality mutual recursion strictly descends in rank
    # every two steps, so its depth never exceeds twice the larger root
    # rank, plus one.
    return 2 * max(rank(a), rank(b)) + 1


def _mem(ctx: _Ctx, e: Term, a: RSet, b: RSet, depth: int, limit: int) -> Verdict:
    assert depth <= limit
    key = ("mem", e, a, b)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    e0 = ctx.proj(e, FST)
    e1 = ctx.proj(e, SND)
    if e0 is None or e1 is None:
        out = _budget(ctx.cap, "projection of a membership realizer did not reduce")
    else:
        out = _disj(_eq(ctx, e1, a, c, depth + 1, limit) for k, c in b if k == e0)
    ctx.memo[key] = out
    return out


def _eq(ctx: _Ctx, e: Term, a: RSet, b: RSet, depth: int, limit: int) -> Verdict:
    assert depth <= limit
    key = ("eq", e, a, b)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    e0 = ctx.proj(e, FST)
    e1 = ctx.proj(e, SND)
    if e0 is None or e1 is None:
        ctx.memo[key] = out = _budget(
            ctx.cap, "projection of an equality realizer did not reduce"
        )
        return out

    def sides():
        for f, c in a:
            w = ctx.apply(e0, f)
            if w is None:
                yield _budget(ctx.cap, "equality witness application did not reduce")
            else:
                yield _mem(ctx, w, c, b, depth + 1, limit)
        for f, c in b:
            w = ctx.apply(e1, f)
            if w is None:
                yield _budget(ctx.cap, "equality witness application did not reduce")
            else:
                yield _mem(ctx, w, c, a, depth + 1, limit)

    ctx.memo[key] = out = _conj(sides())
    return out


# ---------------------------------------------------------------------------
# The labeled relation


def check0_gamma(e: Term, phi: Formula, cap: int, reducer: Reducer | None = None) -> Verdict:
    """The labeled relation: 0-labelled entries carry the witnesses, and
    equality and bounded universals also require the plain relation on the
    projected parameters."""
    if not e.normal:
        raise ModelError("realizers must be normal forms")
    return _check(_Ctx(cap, reducer, labeled=True), e, phi)


def _plain_side(ctx: _Ctx, e: Term, phi: Formula) -> Verdict:
    return _check(ctx.plain(), e, project_formula(phi))


def _mem0(ctx: _Ctx, e: Term, a: LabeledRSet, b: LabeledRSet, depth: int, limit: int) -> Verdict:
    assert depth <= limit
    key = ("mem0", e, a, b)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    e0 = ctx.proj(e, FST)
    e1 = ctx.proj(e, SND)
    if e0 is None or e1 is None:
        out = _budget(ctx.cap, "projection of a membership realizer did not reduce")
    else:
        out = _disj(
            _eq0(ctx, e1, a, c, depth + 1, limit) for s, k, c in b if s == 0 and k == e0
        )
    ctx.memo[key] = out
    return out


def _eq0(ctx: _Ctx, e: Term, a: LabeledRSet, b: LabeledRSet, depth: int, limit: int) -> Verdict:
    assert depth <= limit
    key = ("eq0", e, a, b)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    e0 = ctx.proj(e, FST)
    e1 = ctx.proj(e, SND)
    if e0 is None or e1 is None:
        ctx.memo[key] = out = _budget(
            ctx.cap, "projection of an equality realizer did not reduce"
        )
        return out

    def sides():
        for s, f, c in a:
            if s != 0:
                continue
            w = ctx.apply(e0, f)
            if w is None:
                yield _budget(ctx.cap, "equality witness application did not reduce")
            else:
                yield _mem0(ctx, w, c, b, depth + 1, limit)
        for s, f, c in b:
            if s != 0:
                continue
            w = ctx.apply(e1, f)
            if w is None:
                yield _budget(ctx.cap, "equality witness application did not reduce")
            else:
                yield _mem0(ctx, w, c, a, depth + 1, limit)
        # the plain relation must agree on the label-erased parameters
        pa, pb = project(a), project(b)
        yield _eq(ctx.plain(), e, pa, pb, 1, _atom_depth_limit(pa, pb))

    ctx.memo[key] = out = _conj(sides())
    return out


# ---------------------------------------------------------------------------
# The injectively presented relation


def check0_ip(e: Term, phi: Formula, cap: int, reducer: Reducer | None = None) -> Verdict:
    """Validate parameters, then decide exactly as the plain relation does
    (bounded clauses coincide on injectively presented sets)."""
    for param in formula_params(phi):
        if not isinstance(param, RSet):
            raise ModelError("the injectively presented relation expects plain sets")
        if not validate_injectively_presented(param):
            raise ModelError(f"parameter {param!r} is not injectively presented")
    return check(e, phi, cap, reducer)


# ---------------------------------------------------------------------------
# Bounded handling of the approximate fragment


def check_bounded_approx(
    e: Term,
    phi: Formula,
    candidates: list[Term],
    universe: list[AnySet],
    cap: int,
    reducer: Reducer | None = None,
) -> Verdict:
    """Sound, incomplete refinement for the approximate connectives.

    Candidate realizers drive implication and negation; universe sets drive
    the unbounded quantifiers.  A witnessed failure yields NotRealized;
    nothing is ever affirmed, because the true conditions quantify over
    infinite domains.
    """
    if not e.normal:
        raise ModelError("realizers must be normal forms")
    ctx = _Ctx(cap, reducer, labeled=False)
    bounds = f"candidates={len(candidates)}, universe={len(universe)}, cap={cap}"
    if isinstance(phi, Implies):
        saw_budget = False
        for f in candidates:
            if not f.normal:
                continue
            ant = _check(ctx, f, phi.antecedent)
            if not ant.realized:
                continue
            w = ctx.apply(e, f)
            if w is None:
                saw_budget = True
                continue
            cons = _check(ctx, w, phi.consequent)
            if cons.not_realized:
                return Verdict(
                    NOT_REALIZED, detail=f"candidate realizes the antecedent, consequent refuted ({bounds})"
                )
        if saw_budget:
            return _budget(cap, f"antecedent witness application did not reduce ({bounds})")
        return _approx(f"no refuting candidate found ({bounds})")
    if isinstance(phi, Not):
        for f in candidates:
            if not f.normal:
                continue
            if _check(ctx, f, phi.body).realized:
                return Verdict(NOT_REALIZED, detail=f"candidate realizes the body ({bounds})")
        return _approx(f"no realizing candidate found ({bounds})")
    if isinstance(phi, Forall):
        for a in universe:
            if _check(ctx, e, instantiate(phi.body, a)).not_realized:
                return Verdict(NOT_REALIZED, detail=f"universe instance refuted ({bounds})")
        return _approx(f"no refuting instance found ({bounds})")
    if isinstance(phi, Exists):
        found = any(
            _check(ctx, e, instantiate(phi.body, a)).realized for a in universe
        )
        note = "a universe witness exists" if found else "no universe witness found"
        return _approx(f"{note}, but the domain is unbounded ({bounds})")
    return _check(ctx, e, phi)
