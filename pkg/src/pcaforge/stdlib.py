"""S/K-only standard toolkit: bracket abstraction, booleans, pairs, numerals,
fixed points, and a compiler from primitive-recursive descriptions to terms.

Everything built here contains only S and K (no atoms, no oracles), so every
atom-permutation automorphism fixes each member syntactically.

Bracket abstraction follows the classic definition: abstracting over an
application always splits through S, even when the variable is absent from
one side.  That convention is load-bearing for the stage arithmetic of the
reduction engine (an abstraction applied to an argument always spends at
least one stage).  The price is that abstracting over large constant bodies
triples their size per binder, so the builders below never do that: generic
combinators are abstracted once over variables only, and large constants are
plugged in by application and reduced (`plug`).

Evaluation is innermost, hence strict: arguments reduce before a call fires.
Recursive definitions therefore go through the delayed fixed point `yp_term`
(whose value is defined for every argument and unfolds one step per applied
argument) and guard their recursive branches behind a dummy abstraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .terms import App, K, S, Term, TermError, Var, app


class StdlibError(TermError):
    """A builder was given an inconsistent description."""


# ---------------------------------------------------------------------------
# Bracket abstraction


def bracket_abstract(var: int, body: Term) -> Term:
    """Abstract the variable x<var> out of ``body``.

    The result is a normal form not containing x<var>; applied to a normal
    argument a it reduces exactly when body[x:=a] does, to the same value.
    """
    memo: dict[int, Term] = {}
    agenda: list[Term] = [body]
    while agenda:
        cur = agenda[-1]
        if id(cur) in memo:
            agenda.pop()
            continue
        if isinstance(cur, App):
            l, r = cur.left, cur.right
            if id(l) in memo and id(r) in memo:
                memo[id(cur)] = app(S, memo[id(l)], memo[id(r)])
                agenda.pop()
            else:
                agenda.append(l)
                agenda.append(r)
        elif isinstance(cur, Var) and cur.index == var:
            memo[id(cur)] = app(S, K, K)
            agenda.pop()
        else:
            memo[id(cur)] = App(K, cur)
            agenda.pop()
    return memo[id(body)]


def lam(variables: list[int], body: Term) -> Term:
    """Iterated bracket abstraction, innermost variable last."""
    out = body
    for v in reversed(variables):
        out = bracket_abstract(v, out)
    return out


# ---------------------------------------------------------------------------
# Core constants (construction only; no reduction needed)

I: Term = app(S, K, K)
TRUE: Term = K
FALSE: Term = lam([0, 1], Var(1))
PAIR: Term = lam([0, 1, 2], app(Var(2), Var(0), Var(1)))
FST: Term = lam([0], app(Var(0), TRUE))
SND: Term = lam([0], app(Var(0), FALSE))
SUCC: Term = lam([0], app(PAIR, FALSE, Var(0)))
ISZERO: Term = FST
PRED: Term = SND


def pair_value(a: Term, b: Term) -> Term:
    """The normal form that ``PAIR a b`` reduces to, built directly."""
    return app(S, app(S, I, App(K, a)), App(K, b))


_numerals: list[Term] = [I]
# pair_value(FALSE, rest) == App(_SUCC_PREFIX, App(K, rest))
_SUCC_PREFIX: Term = App(S, app(S, I, App(K, FALSE)))


def numeral(n: int) -> Term:
    """The n-th numeral: zero is the identity, successors are pairs
    (false, predecessor).  This makes iszero/pred single projections."""
    if n < 0:
        raise StdlibError(f"numerals are defined for n >= 0, got {n}")
    while len(_numerals) <= n:
        _numerals.append(pair_value(FALSE, _numerals[-1]))
    return _numerals[n]


def numeral_value(t: Term) -> int | None:
    """Invert :func:`numeral`; None when t is not a numeral."""
    n = 0
    cur = t
    while True:
        if cur == I:
            return n
        if (
            isinstance(cur, App)
            and isinstance(cur.right, App)
            and cur.right.left == K
            and cur.left == _SUCC_PREFIX
        ):
            n += 1
            cur = cur.right.right
            continue
        return None


def is_numeral(t: Term) -> bool:
    return numeral_value(t) is not None


# ---------------------------------------------------------------------------
# Reduction-backed builders (imports deferred to avoid an import cycle: the
# engine needs numerals for the oracle rule)


def nf(t: Term, cap: int = 200_000) -> Term:
    """Reduce a builder-produced term to normal form, or fail loudly."""
    from .reduction import red

    outcome = red(t, cap)
    value = outcome.value_or_none()
    if value is None:
        raise StdlibError(f"builder term did not normalize within {cap} stages")
    return value


def plug(variables: list[int], body: Term, *constants: Term) -> Term:
    """Abstract ``body`` over ``variables`` and apply the leading ones to
    ``constants``, reducing to normal form.

    Equivalent to substituting the constants for the leading variables, but
    keeps them as opaque leaves instead of re-abstracting over their
    structure, so the result stays linear in their size.
    """
    if len(constants) > len(variables):
        raise StdlibError("more constants than variables to plug")
    return nf(app(lam(variables, body), *constants)) if constants else lam(variables, body)


@lru_cache(maxsize=None)
def fixpoint_y() -> Term:
    """The classic self-application fixed point; y f and f (y f) always agree
    (under innermost evaluation both sides are undefined for every f)."""
    half = lam([1], app(Var(0), app(Var(1), Var(1))))  # needs x0 free
    return bracket_abstract(0, App(half, half))


@lru_cache(maxsize=None)
def fixpoint_yp() -> Term:
    """Delayed fixed point: yp f is defined for every f, and (yp f) e agrees
    with f (yp f) e; the self-application only unfolds when e arrives."""
    step = lam([0, 1, 2], app(Var(1), app(Var(0), Var(0), Var(1)), Var(2)))
    return nf(App(step, step))


@lru_cache(maxsize=None)
def eqnat_term() -> Term:
    """Numeral equality: eqnat n m reduces to TRUE iff n == m."""
    e, n, m = Var(0), Var(1), Var(2)
    body = app(
        app(ISZERO, n),
        lam([3], app(ISZERO, m)),
        lam(
            [3],
            app(
                app(ISZERO, m),
                lam([4], FALSE),
                lam([4], app(e, app(PRED, n), app(PRED, m))),
                I,
            ),
        ),
        I,
    )
    return nf(App(fixpoint_yp(), lam([0, 1, 2], body)))


# ---------------------------------------------------------------------------
# Primitive-recursive function descriptions


class PRFun:
    """Description of a function compiled by :func:`compile_primrec`."""

    arity: int


@dataclass(frozen=True)
class Zero(PRFun):
    """The constant-zero function of one argument."""

    arity: int = field(default=1, init=False)


@dataclass(frozen=True)
class Succ(PRFun):
    arity: int = field(default=1, init=False)


@dataclass(frozen=True)
class Proj(PRFun):
    arity: int
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < self.arity:
            raise StdlibError(f"projection index {self.index} outside arity {self.arity}")


@dataclass(frozen=True)
class Comp(PRFun):
    outer: PRFun
    inners: tuple[PRFun, ...]

    def __post_init__(self) -> None:
        if self.outer.arity != len(self.inners):
            raise StdlibError(
                f"outer arity {self.outer.arity} != {len(self.inners)} inner functions"
            )
        arities = {g.arity for g in self.inners}
        if len(arities) != 1:
            raise StdlibError(f"inner functions disagree on arity: {sorted(arities)}")
        object.__setattr__(self, "arity", self.inners[0].arity)


@dataclass(frozen=True)
class PrimRec(PRFun):
    """f(0, ys) = base(ys); f(n+1, ys) = step(n, f(n, ys), ys)."""

    base: PRFun
    step: PRFun

    def __post_init__(self) -> None:
        if self.step.arity != self.base.arity + 2:
            raise StdlibError(
                f"step arity {self.step.arity} != base arity {self.base.arity} + 2"
            )
        object.__setattr__(self, "arity", self.base.arity + 1)


@dataclass(frozen=True)
class BoundedCase(PRFun):
    """Finite table lookup with a default: n -> table.get(n, default)."""

    table: tuple[tuple[int, int], ...]
    default: int
    arity: int = field(default=1, init=False)

    def __post_init__(self) -> None:
        keys = [k for k, _ in self.table]
        if len(keys) != len(set(keys)):
            raise StdlibError("duplicate keys in case table")
        for k, v in self.table:
            if k < 0 or v < 0:
                raise StdlibError("case table entries must be naturals")

    @classmethod
    def of(cls, table: dict[int, int], default: int) -> "BoundedCase":
        return cls(tuple(sorted(table.items())), default)


def eval_prfun(f: PRFun, args: tuple[int, ...]) -> int:
    """Direct host-side evaluation; the oracle the compiled terms are tested
    against."""
    if len(args) != f.arity:
        raise StdlibError(f"expected {f.arity} arguments, got {len(args)}")
    if isinstance(f, Zero):
        return 0
    if isinstance(f, Succ):
        return args[0] + 1
    if isinstance(f, Proj):
        return args[f.index]
    if isinstance(f, Comp):
        return eval_prfun(f.outer, tuple(eval_prfun(g, args) for g in f.inners))
    if isinstance(f, PrimRec):
        n, ys = args[0], args[1:]
        acc = eval_prfun(f.base, ys)
        for i in range(n):
            acc = eval_prfun(f.step, (i, acc) + ys)
        return acc
    if isinstance(f, BoundedCase):
        return dict(f.table).get(args[0], f.default)
    raise StdlibError(f"unknown description {f!r}")


@lru_cache(maxsize=None)
def _case_step() -> Term:
    # case_step v f n  ==  v when n = 0, else f (pred n); branches thunked.
    v, f, n, z = Var(0), Var(1), Var(2), Var(3)
    body = app(app(ISZERO, n), lam([3], v), lam([3], app(f, app(PRED, n))), I)
    return lam([0, 1, 2], body)


@lru_cache(maxsize=None)
def _const_fn() -> Term:
    return lam([0, 1], Var(0))


@lru_cache(maxsize=None)
def _comp_comb(outer_count: int, arity: int) -> Term:
    g = Var(0)
    hs = [Var(1 + i) for i in range(outer_count)]
    xs = [Var(1 + outer_count + i) for i in range(arity)]
    body = app(g, *[app(h, *xs) for h in hs])
    return lam([v.index for v in [g, *hs, *xs]], body)


@lru_cache(maxsize=None)
def _primrec_comb(tail_arity: int) -> Term:
    # recur base step n ys...  with the recursive branch thunked
    r, b, s, n = Var(0), Var(1), Var(2), Var(3)
    ys = [Var(4 + i) for i in range(tail_arity)]
    z = Var(4 + tail_arity)
    rec_call = app(r, b, s, app(PRED, n), *ys)
    body = app(
        app(ISZERO, n),
        lam([z.index], app(b, *ys) if ys else b),
        lam([z.index], app(s, app(PRED, n), rec_call, *ys)),
        I,
    )
    step = lam([r.index, b.index, s.index, n.index] + [y.index for y in ys], body)
    return nf(App(fixpoint_yp(), step))


def compile_primrec(f: PRFun) -> Term:
    """Compile a description into a closed S/K term computing it on numerals."""
    if isinstance(f, Zero):
        return plug([0, 1], Var(0), numeral(0))
    if isinstance(f, Succ):
        return SUCC
    if isinstance(f, Proj):
        return lam(list(range(f.arity)), Var(f.index))
    if isinstance(f, Comp):
        outer = compile_primrec(f.outer)
        inners = [compile_primrec(g) for g in f.inners]
        return nf(app(_comp_comb(len(inners), f.arity), outer, *inners))
    if isinstance(f, PrimRec):
        base = compile_primrec(f.base)
        step = compile_primrec(f.step)
        return nf(app(_primrec_comb(f.base.arity), base, step))
    if isinstance(f, BoundedCase):
        table = dict(f.table)
        top = max(table) if table else -1
        chain = nf(App(_const_fn(), numeral(f.default)))
        for key in range(top, -1, -1):
            chain = nf(app(_case_step(), numeral(table.get(key, f.default)), chain))
        return chain
    raise StdlibError(f"unknown description {f!r}")


# ---------------------------------------------------------------------------
# The named environment


@lru_cache(maxsize=None)
def std_env() -> dict[str, Term]:
    """Named closed S/K terms addressable as $name in the surface syntax."""
    env = {
        "true": TRUE,
        "false": FALSE,
        "p": PAIR,
        "p0": FST,
        "p1": SND,
        "succ": SUCC,
        "pred": PRED,
        "iszero": ISZERO,
        "eqnat": eqnat_term(),
        "y": fixpoint_y(),
        "yp": fixpoint_yp(),
    }
    from .realizability.realizers import equality_realizers

    env.update(equality_realizers())
    return env
