"""Closed realizer terms for the equality laws, the key-collision lemma, and
the atom-capped relation family.

The equality realizers are S/K-only, so every atom-permutation automorphism
fixes them syntactically:

* ``refl`` — a self-referential pair: each projection applied to any f
  yields the pair (f, refl).  Walking any set's entries, that realizes
  reflexivity at every rank.
* ``sym`` — swaps the two halves of an equality realizer.
* ``trans`` — a recursive composer: given realizers for a = b and b = c it
  chases a membership witness through the middle set, composing the
  residual equalities by recursion on rank.  It is total on arbitrary
  arguments (the recursion only unfolds under an applied key).
* ``elem_transport`` / ``set_transport`` — rewrite one side of a
  membership along an equality, via ``trans``.

The key-collision realizer implements the observation that when an
injectively presented set is realizably equal to a set with two entries
sharing a realizer key, both entries' children are forced through the same
middle child, hence realizably equal to each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..gadgets import probe_type1
from ..reduction import Reducer, red
from ..stdlib import (
    FST,
    PAIR,
    SND,
    StdlibError,
    fixpoint_yp,
    lam,
    nf,
    numeral_value,
    plug,
)
from ..terms import App, Oracle, Perm, Term, Var, app
from .checker import Verdict, check
from .formulas import eq
from .sets import (
    LabeledRSet,
    ModelError,
    RSet,
    canonical_numeral,
    graph_rset,
    internal_pair,
    label_all,
    validate_injectively_presented,
)


@lru_cache(maxsize=None)
def _refl() -> Term:
    # h with h f = pair(f, pair(h, h)); the realizer is pair(h, h).
    h, f = Var(0), Var(1)
    step = lam([0, 1], app(PAIR, f, app(PAIR, h, h)))
    h_value = nf(App(fixpoint_yp(), step))
    return nf(app(PAIR, h_value, h_value))


@lru_cache(maxsize=None)
def _sym() -> Term:
    e = Var(0)
    return lam([0], app(PAIR, App(SND, e), App(FST, e)))


@lru_cache(maxsize=None)
def _trans() -> Term:
    # trans e1 e2 builds the pair of witness-chasers described above; the
    # recursive calls sit under an applied key, so the value always exists.
    t, e1, e2, f = Var(0), Var(1), Var(2), Var(3)

    def chase(first: Term, second: Term) -> Term:
        # first-step witness: (first)0 f; second-step: (second)0 (that)0
        step1 = app(App(FST, first), f)
        step2 = app(App(FST, second), App(FST, step1))
        return lam(
            [3],
            app(PAIR, App(FST, step2), app(t, App(SND, step1), App(SND, step2))),
        )

    swap = lambda x: app(PAIR, App(SND, x), App(FST, x))  # noqa: E731
    body = app(PAIR, chase(e1, e2), chase(swap(e2), swap(e1)))
    return nf(App(fixpoint_yp(), lam([0, 1, 2], body)))


@lru_cache(maxsize=None)
def _elem_transport() -> Term:
    # from a = b and b in z: reuse b's container key, compose the equality.
    e, f = Var(0), Var(1)
    return plug(
        [2, 0, 1],
        app(PAIR, App(FST, f), app(Var(2), e, App(SND, f))),
        _trans(),
    )


@lru_cache(maxsize=None)
def _set_transport() -> Term:
    # from a = b and c in a: push the membership key through (a = b)'s
    # left half, compose the equalities.
    e, f = Var(0), Var(1)
    step = app(App(FST, e), App(FST, f))
    return plug(
        [2, 0, 1],
        app(PAIR, App(FST, step), app(Var(2), App(SND, f), App(SND, step))),
        _trans(),
    )


@lru_cache(maxsize=None)
def equality_realizers() -> dict[str, Term]:
    """The five equality-law realizers, all S/K-only normal forms."""
    return {
        "refl": _refl(),
        "sym": _sym(),
        "trans": _trans(),
        "elem_transport": _elem_transport(),
        "set_transport": _set_transport(),
    }


# ---------------------------------------------------------------------------
# The key-collision realizer


@lru_cache(maxsize=None)
def key_collision_realizer() -> Term:
    """e with: if x realizes an equality whose right side has two entries
    keyed g, then e x g realizes the equality of those entries' children."""
    x, y = Var(0), Var(1)
    w = App(SND, app(App(SND, x), y))
    body = app(Var(2), w, App(Var(3), w))
    return plug([2, 3, 0, 1], body, _trans(), _sym())


def key_collision_check(
    a: RSet,
    b: RSet,
    f: Term,
    g: Term,
    cap: int,
    reducer: Reducer | None = None,
) -> Verdict:
    """End-to-end use of the key-collision realizer.

    Preconditions checked: a injectively presented; f realizes a = b within
    the budget; b has at least two entries sharing the key g.  The verdict
    is the conjunction of checks of e f g against every pair of children
    sharing that key.
    """
    if not validate_injectively_presented(a):
        raise ModelError("the left set must be injectively presented")
    shared = [c for k, c in b if k == g]
    if len(shared) < 2:
        raise ModelError("the right set needs two entries sharing the given key")
    if not check(f, eq(a, b), cap, reducer).realized:
        raise ModelError("f does not realize the equality of the two sets")
    witness = red(app(key_collision_realizer(), f, g), cap, reducer).value_or_none()
    if witness is None:
        return Verdict("unknown", "budget", f"realizer application within cap {cap}")
    verdicts = []
    for i in range(len(shared)):
        for j in range(len(shared)):
            if i != j:
                verdicts.append(check(witness, eq(shared[i], shared[j]), cap, reducer))
    for v in verdicts:
        if not v.realized:
            return v
    return verdicts[0]


# ---------------------------------------------------------------------------
# Atom-capped relations over a finite probe family


def max_atom_oracle() -> Term:
    """The identity-permutation oracle: applied to a closed normal form, it
    reduces to the numeral of the largest atom index occurring in it."""
    return Oracle(Perm.identity())


@dataclass(frozen=True)
class CappedRelationEntry:
    probe: Term
    graph: RSet
    atom_level: int  # value of the oracle on the probe
    capped: bool  # whether the level exceeded the cap index


def build_capped_relation(
    probes: list[Term],
    cap_index: int,
    trunc: int,
    cap: int,
    reducer: Reducer | None = None,
) -> tuple[LabeledRSet, list[CappedRelationEntry]]:
    """The finite restriction of the atom-capped relation to a probe family.

    Each numeral-total probe f contributes the 0-labelled entry
    (f, (graph of f, level of f)) where the level is the oracle value of f;
    levels at most ``cap_index`` are exact, larger ones stand as one
    representative of the blurred range above the cap.  Graphs are
    truncated below ``trunc``.
    """
    zeta = max_atom_oracle()
    entries = []
    triples = []
    for f in probes:
        pre = probe_type1(f, trunc - 1, cap, reducer)
        if not pre.consistent:
            raise ModelError(f"probe fails numeral-totality at {pre.witness}")
        value = red(App(zeta, f), cap, reducer).value_or_none()
        level = None if value is None else numeral_value(value)
        if level is None:
            raise StdlibError("oracle application on a closed normal form cannot fail")
        graph = graph_rset(f, trunc, cap, reducer)
        child = internal_pair(graph, canonical_numeral(level))
        triples.append((0, f, label_all(child)))
        entries.append(CappedRelationEntry(f, graph, level, level > cap_index))
    return LabeledRSet(frozenset(triples)), entries


@lru_cache(maxsize=None)
def mv_function_realizer() -> Term:
    """Realizer that the capped relation relates every function to a value:
    x maps to the pair (x, (oracle level of x, reflexivity))."""
    x = Var(0)
    body = app(PAIR, x, app(PAIR, App(Var(1), x), Var(2)))
    return plug([1, 2, 0], body, max_atom_oracle(), _refl())


def build_type2_composite(e: Term, f: Term) -> Term:
    """The one-variable composite x -> fst(e (fst (f x))), the candidate
    extensional identity extracted from a pair of relation realizers."""
    x = Var(0)
    body = App(Var(1), app(Var(2), App(Var(1), App(Var(3), x))))
    return plug([1, 2, 3, 0], body, FST, e, f)
