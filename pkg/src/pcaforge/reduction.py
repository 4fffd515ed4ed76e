"""Budgeted leftmost-innermost reduction with exact stage accounting.

The evaluation operator is a tower of partial functions indexed by a stage
number.  Stage 0 resolves a term that is already normal, a two-argument K
spine with normal arguments, or an oracle applied to a closed normal
argument.  Stage n+1 first defers to stage n, then decomposes a
three-argument S spine with normal arguments into the two instantiated
applications and their combination, and otherwise decomposes an application
into left part, right part, and the application of their values — each
subproblem at stage n.  Arguments therefore always reduce before a call
fires: the system is strict, and the strategy (not confluence, which fails
here) is what makes evaluation deterministic.

Definedness of the tower encodes the halting problem, so the engine never
claims divergence: it reports the exact least stage on success and
``BudgetExhausted`` otherwise, which only means the given budget was too
small.

Two facts make the least stage computable compositionally: each resolution
clause is deterministic, and stages are monotone (anything defined at stage
n is defined with the same value at every later stage).  The least stage of
a decomposition is then 1 + max of its components' least stages, which is
what the iterative evaluator below computes.  Successes are cached globally
(a least stage is intrinsic to the term); failures are cached with the
largest budget at which they were established.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .stdlib import numeral
from .terms import (
    KIND_APP,
    KIND_K,
    KIND_ORACLE,
    KIND_S,
    App,
    Oracle,
    Perm,
    Term,
    TermError,
)


class ReductionError(TermError):
    """Precondition violation on an engine entry point."""


# ---------------------------------------------------------------------------
# Outcomes


@dataclass(frozen=True)
class Reduced:
    """Value plus the least stage at which the tower defines it."""

    value: Term
    stage: int

    def value_or_none(self) -> Term | None:
        return self.value

    @property
    def exhausted(self) -> bool:
        return False


@dataclass(frozen=True)
class BudgetExhausted:
    """No stage up to ``cap`` defines the term.  Not a divergence claim."""

    cap: int

    def value_or_none(self) -> None:
        return None

    @property
    def exhausted(self) -> bool:
        return True


ReductionOutcome = Reduced | BudgetExhausted


# ---------------------------------------------------------------------------
# Application trees (terms over the algebra of normal forms)


@dataclass(frozen=True)
class Leaf:
    value: Term

    def __post_init__(self) -> None:
        if not self.value.normal:
            raise ReductionError("tree leaves must be normal forms")


@dataclass(frozen=True)
class Node:
    left: "AppTree"
    right: "AppTree"


AppTree = Leaf | Node


def flatten(tree: AppTree) -> Term:
    """The term obtained by forgetting the tree structure."""
    if isinstance(tree, Leaf):
        return tree.value
    return App(flatten(tree.left), flatten(tree.right))


# ---------------------------------------------------------------------------
# The evaluator


def _oracle_value(perm: Perm, argument: Term) -> Term:
    atoms = argument.atoms
    if not atoms:
        return numeral(0)
    return numeral(max(perm(m) for m in atoms))


def _base_step(t: Term) -> tuple[int, Term] | None:
    """The three stage-0 clauses, or None."""
    if t.normal:
        return (0, t)
    # t is a non-normal application here
    left, right = t.left, t.right  # type: ignore[union-attr]
    lk = left.kind
    if lk == KIND_APP and left.left.kind == KIND_K:
        if left.right.normal and right.normal:
            return (0, left.right)
    elif lk == KIND_ORACLE and right.normal and right.closed:
        return (0, _oracle_value(left.perm, right))
    return None


def _components(t: Term) -> tuple[Term, Term]:
    """The two leading subproblems of a decomposition step.

    For S x y u with normal x, y, u these are (x u) and (y u); otherwise,
    for an application l r, they are l and r.  The third subproblem is the
    application of their values and depends on the results.
    """
    left, right = t.left, t.right  # type: ignore[union-attr]
    if (
        left.kind == KIND_APP
        and left.left.kind == KIND_APP
        and left.left.left.kind == KIND_S
        and left.left.right.normal
        and left.right.normal
        and right.normal
    ):
        return App(left.left.right, right), App(left.right, right)
    return left, right


_FAILED = object()


class Reducer:
    """Evaluator with success/failure caches.

    Success entries (term -> least stage, value) are valid forever; failure
    entries record the largest budget at which exhaustion was proven.
    """

    def __init__(self) -> None:
        self._ok: dict[Term, tuple[int, Term]] = {}
        self._fail: dict[Term, int] = {}
        self._comps: dict[Term, tuple[Term, Term]] = {}
        # Values are deduplicated so repeated results share one object and
        # later cache lookups resolve by identity.
        self._canon: dict[Term, Term] = {}

    def clear(self) -> None:
        self._ok.clear()
        self._fail.clear()
        self._comps.clear()
        self._canon.clear()

    def reduce(self, t: Term, cap: int) -> ReductionOutcome:
        if cap < 0:
            raise ReductionError(f"budget must be >= 0, got {cap}")
        res = self._eval(t, cap)
        if res is None:
            return BudgetExhausted(cap)
        return Reduced(res[1], res[0])

    def stage_of(self, t: Term, cap: int) -> tuple[int, Term] | None:
        return self._eval(t, cap)

    def _eval(self, t0: Term, cap0: int) -> tuple[int, Term] | None:
        ok, fail, comps = self._ok, self._fail, self._comps
        canon = self._canon

        def quick(t: Term, cap: int):
            # Resolve without a frame when possible: base clause, success
            # cache, or an established failure.  Returns a result pair,
            # _FAILED, or None meaning a frame is needed.
            if t.normal:
                return (0, t)
            left = t.left  # non-normal terms are applications
            lk = left.kind
            if lk == KIND_APP:
                if left.left.kind == KIND_K and left.right.normal and t.right.normal:
                    return (0, left.right)
            elif lk == KIND_ORACLE:
                right = t.right
                if right.normal and right.closed:
                    return (0, _oracle_value(left.perm, right))
            hit = ok.get(t)
            if hit is not None:
                return hit if hit[0] <= cap else _FAILED
            if cap == 0 or fail.get(t, -1) >= cap:
                return _FAILED
            return None

        # Frame slots: [term, cap, phase, second component, stage acc, value1]
        stack: list[list] = []
        pending: Term = t0
        pending_cap = cap0
        while True:
            # Descend until the pending subproblem resolves without a frame.
            res = quick(pending, pending_cap)
            while res is None:
                pair = comps.get(pending)
                if pair is None:
                    pair = comps.setdefault(pending, _components(pending))
                stack.append([pending, pending_cap, 1, pair[1], 0, None])
                pending = pair[0]
                pending_cap -= 1
                res = quick(pending, pending_cap)
            ret: tuple[int, Term] | None = None if res is _FAILED else res
            # Deliver the result upward, resuming the next phase of each frame.
            while True:
                if not stack:
                    return ret
                if ret is None:
                    # A failed component fails every enclosing frame at its cap.
                    while stack:
                        f = stack.pop()
                        if fail.get(f[0], -1) < f[1]:
                            fail[f[0]] = f[1]
                    return None
                fr = stack[-1]
                phase = fr[2]
                if phase == 1:
                    fr[4], fr[5] = ret
                    fr[2] = 2
                    pending = fr[3]
                    pending_cap = fr[1] - 1
                    break
                if phase == 2:
                    s2, v2 = ret
                    if s2 > fr[4]:
                        fr[4] = s2
                    fr[2] = 3
                    pending = App(fr[5], v2)
                    pending_cap = fr[1] - 1
                    break
                # phase 3: combine and keep delivering to the parent
                s3, v3 = ret
                stage = fr[4] + 1 if fr[4] >= s3 else s3 + 1
                ft = fr[0]
                if ft not in ok:
                    v3 = canon.setdefault(v3, v3)
                    ok[ft] = (stage, v3)
                ret = (stage, v3)
                stack.pop()


_DEFAULT = Reducer()


def default_reducer() -> Reducer:
    return _DEFAULT


def red(t: Term, cap: int, reducer: Reducer | None = None) -> ReductionOutcome:
    """Reduce t, reporting the least defining stage up to ``cap``."""
    return (reducer or _DEFAULT).reduce(t, cap)


def red_n(n: int, t: Term, reducer: Reducer | None = None) -> Term | None:
    """The stage-n partial evaluation operator; None when undefined at n."""
    if n < 0:
        raise ReductionError(f"stage index must be >= 0, got {n}")
    res = (reducer or _DEFAULT).stage_of(t, n)
    return None if res is None else res[1]


def pca_apply(s: Term, t: Term, cap: int, reducer: Reducer | None = None) -> ReductionOutcome:
    """Apply one normal form to another in the algebra."""
    if not s.normal or not t.normal:
        raise ReductionError("application in the algebra requires normal forms")
    return red(App(s, t), cap, reducer)


def denote(tree: AppTree, cap: int, reducer: Reducer | None = None) -> ReductionOutcome:
    """Denotation of an application tree: children first, then one application
    per node.  Agrees with reducing the flattened term in definedness and
    value."""
    if isinstance(tree, Leaf):
        return Reduced(tree.value, 0)
    left = denote(tree.left, cap, reducer)
    if left.exhausted:
        return left
    right = denote(tree.right, cap, reducer)
    if right.exhausted:
        return right
    return red(App(left.value, right.value), cap, reducer)


# ---------------------------------------------------------------------------
# Tracing

RED0_NF = "RED0-NF"
RED0_K = "RED0-K"
RED0_ZETA = "RED0-ZETA"
REDN_MONO = "REDn-MONO"
REDN_S = "REDn-S"
REDN_APP = "REDn-APP"


@dataclass(frozen=True)
class TraceStep:
    tag: str
    redex: Term
    contractum: Term | None  # None when the budget ran out below this step


def trace(t: Term, cap: int) -> list[TraceStep]:
    """Clause firings in evaluation order.

    Each resolved query emits its clause entry before the entries of its
    subqueries; a repeated subproblem emits a single carry-over entry.  When
    the reduction succeeds, the final entry's contractum is its value.
    """
    reducer = Reducer()
    steps: list[TraceStep] = []
    seen: set[Term] = set()

    def base_tag(term: Term) -> str:
        if term.normal:
            return RED0_NF
        assert isinstance(term, App)
        return RED0_ZETA if isinstance(term.left, Oracle) else RED0_K

    agenda: list[tuple[Term, int]] = [(t, cap)]
    while agenda:
        term, cap_here = agenda.pop()
        base = _base_step(term)
        if base is not None:
            steps.append(TraceStep(base_tag(term), term, base[1]))
            continue
        res = reducer.stage_of(term, cap_here)
        if term in seen:
            steps.append(TraceStep(REDN_MONO, term, None if res is None else res[1]))
            continue
        seen.add(term)
        c1, c2 = _components(term)
        is_s_spine = c1 is not term.left  # type: ignore[union-attr]
        steps.append(
            TraceStep(REDN_S if is_s_spine else REDN_APP, term, None if res is None else res[1])
        )
        if cap_here == 0:
            continue
        r1 = reducer.stage_of(c1, cap_here - 1)
        r2 = reducer.stage_of(c2, cap_here - 1)
        children = [(c1, cap_here - 1), (c2, cap_here - 1)]
        if r1 is not None and r2 is not None:
            children.append((App(r1[1], r2[1]), cap_here - 1))
        agenda.extend(reversed(children))
    return steps


def format_trace(steps: list[TraceStep]) -> Iterator[str]:
    from .terms import print_term

    for step in steps:
        rhs = "?" if step.contractum is None else print_term(step.contractum)
        yield f"{step.tag} | {print_term(step.redex)} -> {rhs}"
