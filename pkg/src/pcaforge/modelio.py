"""File format for sets, formulas, and check requests.

A model file is a sequence of forms:

    (def NAME SET)                 bind a set to a name
    (check "REALIZER" FORMULA)     plain relation
    (check0g "REALIZER" FORMULA)   labeled relation
    (check0ip "REALIZER" FORMULA)  injectively presented relation
    (collision NAME NAME "F" "G")  key-collision instance on two bound sets

Sets:

    (rset (pair "TERM" SET) ...)           plain, entries keyed by terms
    (lrset (labeled 0|1 "TERM" SET) ...)   labeled
    NAME                                   reference to a def

Formulas:

    (mem A B) (eq A B) (and F G) (or F G) (implies F G) (not F)
    (bex A F) (ball A F) (ex F) (all F) (pairof A B) (var N)

where A, B are set expressions: a set form, a NAME, (var N) for a bound
variable, or (pairof A B).  Terms are quoted strings in the surface term
syntax.  Verdicts serialize as (verdict REALIZED), (verdict NOT-REALIZED),
or (verdict UNKNOWN (reason R) (detail "...")).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sexpr
from .sexpr import Symbol
from .syntax import parse, render
from .realizability import (
    And,
    BoundedExists,
    BoundedForall,
    BVar,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    LabeledRSet,
    Mem,
    ModelError,
    Not,
    Or,
    PairOf,
    Param,
    RSet,
    SetExpr,
    Verdict,
)


def encode_rset(a: RSet) -> list:
    entries = sorted(((render(e, sugar=False), b) for e, b in a), key=lambda p: p[0])
    return [Symbol("rset")] + [
        [Symbol("pair"), key, encode_rset(b)] for key, b in entries
    ]


def encode_lrset(a: LabeledRSet) -> list:
    entries = sorted(((s, render(e, sugar=False), b) for s, e, b in a), key=lambda p: (p[1], p[0]))
    return [Symbol("lrset")] + [
        [Symbol("labeled"), s, key, encode_lrset(b)] for s, key, b in entries
    ]


def encode_set(a: RSet | LabeledRSet) -> list:
    return encode_rset(a) if isinstance(a, RSet) else encode_lrset(a)


def decode_set(form, env: dict[str, RSet | LabeledRSet] | None = None):
    env = env or {}
    if isinstance(form, Symbol):
        if form not in env:
            raise ModelError(f"unknown set name {form}")
        return env[form]
    if not (isinstance(form, list) and form and isinstance(form[0], Symbol)):
        raise ModelError(f"expected a set form, got {form!r}")
    head = form[0]
    if head == "rset":
        pairs = []
        for entry in form[1:]:
            if not (isinstance(entry, list) and len(entry) == 3 and entry[0] == Symbol("pair")):
                raise ModelError(f"bad plain-set entry {entry!r}")
            child = decode_set(entry[2], env)
            if not isinstance(child, RSet):
                raise ModelError("plain sets cannot contain labeled children")
            pairs.append((parse(entry[1]), child))
        return RSet(frozenset(pairs))
    if head == "lrset":
        triples = []
        for entry in form[1:]:
            if not (
                isinstance(entry, list) and len(entry) == 4 and entry[0] == Symbol("labeled")
            ):
                raise ModelError(f"bad labeled-set entry {entry!r}")
            child = decode_set(entry[3], env)
            if not isinstance(child, LabeledRSet):
                raise ModelError("labeled sets cannot contain plain children")
            triples.append((entry[1], parse(entry[2]), child))
        return LabeledRSet(frozenset(triples))
    raise ModelError(f"unknown set former {head}")


_CONNECTIVES = {
    "and": And,
    "or": Or,
    "implies": Implies,
}


def decode_formula(form, env: dict[str, RSet | LabeledRSet] | None = None) -> Formula:
    env = env or {}
    if not (isinstance(form, list) and form and isinstance(form[0], Symbol)):
        raise ModelError(f"expected a formula form, got {form!r}")
    head, rest = str(form[0]), form[1:]
    if head in ("mem", "eq"):
        if len(rest) != 2:
            raise ModelError(f"{head} takes two set expressions")
        ctor = Mem if head == "mem" else Eq
        return ctor(_decode_expr(rest[0], env), _decode_expr(rest[1], env))
    if head in _CONNECTIVES:
        if len(rest) != 2:
            raise ModelError(f"{head} takes two formulas")
        return _CONNECTIVES[head](decode_formula(rest[0], env), decode_formula(rest[1], env))
    if head == "not":
        if len(rest) != 1:
            raise ModelError("not takes one formula")
        return Not(decode_formula(rest[0], env))
    if head in ("bex", "ball"):
        if len(rest) != 2:
            raise ModelError(f"{head} takes a bound and a body")
        ctor = BoundedExists if head == "bex" else BoundedForall
        return ctor(_decode_expr(rest[0], env), decode_formula(rest[1], env))
    if head in ("ex", "all"):
        if len(rest) != 1:
            raise ModelError(f"{head} takes one formula")
        return (Exists if head == "ex" else Forall)(decode_formula(rest[0], env))
    raise ModelError(f"unknown formula head {head}")


def _decode_expr(form, env) -> SetExpr:
    if isinstance(form, list) and form and form[0] == Symbol("var"):
        if len(form) != 2 or not isinstance(form[1], int):
            raise ModelError("variable references are (var N)")
        return BVar(form[1])
    if isinstance(form, list) and form and form[0] == Symbol("pairof"):
        if len(form) != 3:
            raise ModelError("pairof takes two set expressions")
        return PairOf(_decode_expr(form[1], env), _decode_expr(form[2], env))
    return Param(decode_set(form, env))


def encode_formula(phi: Formula) -> list:
    if isinstance(phi, Mem):
        return [Symbol("mem"), _encode_expr(phi.element), _encode_expr(phi.container)]
    if isinstance(phi, Eq):
        return [Symbol("eq"), _encode_expr(phi.left), _encode_expr(phi.right)]
    if isinstance(phi, And):
        return [Symbol("and"), encode_formula(phi.left), encode_formula(phi.right)]
    if isinstance(phi, Or):
        return [Symbol("or"), encode_formula(phi.left), encode_formula(phi.right)]
    if isinstance(phi, Implies):
        return [Symbol("implies"), encode_formula(phi.antecedent), encode_formula(phi.consequent)]
    if isinstance(phi, Not):
        return [Symbol("not"), encode_formula(phi.body)]
    if isinstance(phi, BoundedExists):
        return [Symbol("bex"), _encode_expr(phi.bound), encode_formula(phi.body)]
    if isinstance(phi, BoundedForall):
        return [Symbol("ball"), _encode_expr(phi.bound), encode_formula(phi.body)]
    if isinstance(phi, Exists):
        return [Symbol("ex"), encode_formula(phi.body)]
    if isinstance(phi, Forall):
        return [Symbol("all"), encode_formula(phi.body)]
    raise ModelError(f"unknown formula {phi!r}")


def _encode_expr(expr: SetExpr) -> list:
    if isinstance(expr, Param):
        return encode_set(expr.value)
    if isinstance(expr, BVar):
        return [Symbol("var"), expr.index]
    if isinstance(expr, PairOf):
        return [Symbol("pairof"), _encode_expr(expr.left), _encode_expr(expr.right)]
    raise ModelError(f"unknown set expression {expr!r}")


def encode_verdict(v: Verdict) -> list:
    if v.unknown:
        out = [Symbol("verdict"), Symbol("UNKNOWN"), [Symbol("reason"), Symbol(v.reason or "")]]
        if v.detail:
            out.append([Symbol("detail"), v.detail])
        return out
    return [Symbol("verdict"), Symbol("REALIZED" if v.realized else "NOT-REALIZED")]


def decode_verdict(form) -> Verdict:
    if not (isinstance(form, list) and form and form[0] == Symbol("verdict")):
        raise ModelError(f"expected a verdict form, got {form!r}")
    status = str(form[1])
    if status == "REALIZED":
        return Verdict("realized")
    if status == "NOT-REALIZED":
        return Verdict("not-realized")
    reason = None
    detail = None
    for extra in form[2:]:
        if isinstance(extra, list) and extra and extra[0] == Symbol("reason"):
            reason = str(extra[1])
        if isinstance(extra, list) and extra and extra[0] == Symbol("detail"):
            detail = str(extra[1])
    return Verdict("unknown", reason, detail)


# ---------------------------------------------------------------------------
# Whole-file requests


@dataclass(frozen=True)
class CheckRequest:
    relation: str  # check | check0g | check0ip
    realizer: str
    formula: Formula


@dataclass(frozen=True)
class CollisionRequest:
    left: RSet
    right: RSet
    equality_realizer: str
    shared_key: str


def load_requests(text: str) -> list[CheckRequest | CollisionRequest]:
    env: dict[str, RSet | LabeledRSet] = {}
    out: list[CheckRequest | CollisionRequest] = []
    for form in sexpr.loads(text):
        if not (isinstance(form, list) and form and isinstance(form[0], Symbol)):
            raise ModelError(f"bad top-level form {form!r}")
        head = str(form[0])
        if head == "def":
            if len(form) != 3 or not isinstance(form[1], Symbol):
                raise ModelError("def takes a name and a set")
            env[str(form[1])] = decode_set(form[2], env)
        elif head in ("check", "check0g", "check0ip"):
            if len(form) != 3 or not isinstance(form[1], str):
                raise ModelError(f"{head} takes a quoted realizer and a formula")
            out.append(CheckRequest(head, form[1], decode_formula(form[2], env)))
        elif head == "collision":
            if len(form) != 5 or not isinstance(form[3], str) or not isinstance(form[4], str):
                raise ModelError("collision takes two set names and two quoted terms")
            left = decode_set(form[1], env)
            right = decode_set(form[2], env)
            if not isinstance(left, RSet) or not isinstance(right, RSet):
                raise ModelError("collision requests need plain sets")
            out.append(CollisionRequest(left, right, form[3], form[4]))
        else:
            raise ModelError(f"unknown top-level form {head}")
    return out
