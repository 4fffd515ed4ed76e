"""Deterministic random generators and realizer synthesis for test suites.

Everything takes an explicit ``random.Random`` so suites are reproducible
from a seed.  The synthesizer builds realizers for a restricted family of
true decidable statements (reflexive equalities, literal memberships, and
their finite combinations); suites use it to exercise the Realized paths of
the checkers, which random realizers almost never hit.
"""

from __future__ import annotations

import random

from .reduction import AppTree, Leaf, Node
from .stdlib import FALSE, I, PAIR, TRUE, lam, nf, numeral
from .terms import App, Atom, K, Oracle, Perm, S, Term, Var, app
from .realizability import (
    And,
    BoundedExists,
    BoundedForall,
    BVar,
    Eq,
    Formula,
    LabeledRSet,
    Mem,
    Or,
    Param,
    RSet,
    canonical_numeral,
    equality_realizers,
    instantiate,
    label_all,
    lset,
    resolve,
    rset,
)

# ---------------------------------------------------------------------------
# Terms and permutations

_LEAF_POOL: list[Term] = [S, K, I, TRUE, FALSE]


def random_perm(rng: random.Random, universe: int = 9) -> Perm:
    points = rng.sample(range(1, universe + 1), rng.randint(0, min(4, universe)))
    shuffled = points[:]
    rng.shuffle(shuffled)
    return Perm.from_mapping(zip(points, shuffled))


def random_term(rng: random.Random, size: int = 8, atoms: int = 4, vars_: int = 0) -> Term:
    """A random application tree over combinators, atoms, oracles, numerals."""
    if size <= 1:
        roll = rng.random()
        if roll < 0.45:
            return rng.choice(_LEAF_POOL)
        if roll < 0.7:
            return Atom(rng.randint(1, atoms))
        if roll < 0.8 and vars_ > 0:
            return Var(rng.randint(0, vars_ - 1))
        if roll < 0.9:
            return Oracle(random_perm(rng, atoms))
        return numeral(rng.randint(0, 3))
    split = rng.randint(1, size - 1)
    return App(
        random_term(rng, split, atoms, vars_),
        random_term(rng, size - split, atoms, vars_),
    )


def random_normal_term(rng: random.Random, size: int = 8, atoms: int = 4) -> Term:
    """Rejection-sampled normal form."""
    while True:
        t = random_term(rng, size, atoms)
        if t.normal:
            return t


def random_app_tree(rng: random.Random, depth: int, pool: list[Term]) -> AppTree:
    if depth <= 0 or rng.random() < 0.3:
        return Leaf(rng.choice(pool))
    return Node(
        random_app_tree(rng, depth - 1, pool), random_app_tree(rng, depth - 1, pool)
    )


# ---------------------------------------------------------------------------
# Sets


def random_rset(rng: random.Random, max_rank: int = 3, width: int = 3) -> RSet:
    if max_rank <= 0:
        return rset()
    n = rng.randint(0, width)
    pairs = []
    for _ in range(n):
        key = _random_key(rng)
        child = random_rset(rng, rng.randint(0, max_rank - 1), width)
        pairs.append((key, child))
    return rset(*pairs)


def random_labeled_rset(
    rng: random.Random, max_rank: int = 3, width: int = 3, zero_bias: float = 0.7
) -> LabeledRSet:
    if max_rank <= 0:
        return lset()
    n = rng.randint(0, width)
    triples = []
    for _ in range(n):
        label = 0 if rng.random() < zero_bias else 1
        key = _random_key(rng)
        child = random_labeled_rset(rng, rng.randint(0, max_rank - 1), width, zero_bias)
        triples.append((label, key, child))
    return lset(*triples)


def _random_key(rng: random.Random) -> Term:
    roll = rng.random()
    if roll < 0.5:
        return numeral(rng.randint(0, 3))
    if roll < 0.75:
        return rng.choice([K, S, I, TRUE])
    return App(K, numeral(rng.randint(0, 2)))


def prune_to_injective(a: RSet) -> RSet:
    """Drop all but one child per realizer key, hereditarily."""
    seen: dict[Term, RSet] = {}
    for key, child in sorted(a.elements, key=lambda p: hash(p)):
        seen.setdefault(key, prune_to_injective(child))
    return rset(*seen.items())


def random_injective_rset(rng: random.Random, max_rank: int = 3, width: int = 3) -> RSet:
    return prune_to_injective(random_rset(rng, max_rank, width))


# ---------------------------------------------------------------------------
# Decidable formulas over given parameters


def random_decidable_formula(
    rng: random.Random, params: list[RSet | LabeledRSet], depth: int = 2
) -> Formula:
    def pick():
        return Param(rng.choice(params))

    if depth <= 0 or rng.random() < 0.4:
        return Eq(pick(), pick()) if rng.random() < 0.5 else Mem(pick(), pick())
    roll = rng.random()
    if roll < 0.3:
        return And(
            random_decidable_formula(rng, params, depth - 1),
            random_decidable_formula(rng, params, depth - 1),
        )
    if roll < 0.6:
        return Or(
            random_decidable_formula(rng, params, depth - 1),
            random_decidable_formula(rng, params, depth - 1),
        )
    ctor = BoundedExists if roll < 0.8 else BoundedForall
    body = Eq(BVar(0), BVar(0)) if rng.random() < 0.6 else Mem(BVar(0), Param(rng.choice(params)))
    return ctor(pick(), body)


def random_realizer(rng: random.Random) -> Term:
    """Plausible-looking realizer material: pairs of small things."""
    def leaf():
        roll = rng.random()
        if roll < 0.4:
            return numeral(rng.randint(0, 3))
        if roll < 0.7:
            return rng.choice([K, S, I, equality_realizers()["refl"]])
        return App(K, numeral(rng.randint(0, 2)))

    depth = rng.randint(0, 2)
    t = leaf()
    for _ in range(depth):
        t = nf(app(PAIR, t, leaf()))
    return t


# ---------------------------------------------------------------------------
# Realizer synthesis for true statements


class SynthesisFailure(Exception):
    """The statement is outside the synthesizable family (or false)."""


def synthesize_realizer(phi: Formula) -> Term:
    """A realizer for a restricted family of true decidable statements.

    Handles reflexive equalities, literal memberships (the element appears
    as a child, keyed however it is keyed), conjunctions, disjunctions with
    one synthesizable side, bounded existentials with a synthesizable
    witness, and bounded universals whose body synthesizes to one uniform
    realizer across all children.
    """
    refl = equality_realizers()["refl"]
    if isinstance(phi, Eq):
        a, b = resolve(phi.left), resolve(phi.right)
        if a == b:
            return refl
        raise SynthesisFailure("only reflexive equalities synthesize")
    if isinstance(phi, Mem):
        a, b = resolve(phi.element), resolve(phi.container)
        for entry in _entries(b):
            key, child = entry[-2], entry[-1]
            if len(entry) == 3 and entry[0] != 0:
                continue
            if child == a:
                return nf(app(PAIR, key, refl))
        raise SynthesisFailure("element is not literally a member")
    if isinstance(phi, And):
        return nf(app(PAIR, synthesize_realizer(phi.left), synthesize_realizer(phi.right)))
    if isinstance(phi, Or):
        for tag, side in ((0, phi.left), (1, phi.right)):
            try:
                return nf(app(PAIR, numeral(tag), synthesize_realizer(side)))
            except SynthesisFailure:
                continue
        raise SynthesisFailure("neither side synthesizes")
    if isinstance(phi, BoundedExists):
        bound = resolve(phi.bound)
        for entry in _entries(bound):
            if len(entry) == 3 and entry[0] != 0:
                continue
            key, child = entry[-2], entry[-1]
            try:
                witness = synthesize_realizer(instantiate(phi.body, child))
            except SynthesisFailure:
                continue
            return nf(app(PAIR, key, witness))
        raise SynthesisFailure("no witness in the bound")
    if isinstance(phi, BoundedForall):
        bound = resolve(phi.bound)
        realizers = []
        for entry in _entries(bound):
            if len(entry) == 3 and entry[0] != 0:
                continue
            realizers.append(synthesize_realizer(instantiate(phi.body, entry[-1])))
        uniform = realizers[0] if realizers else equality_realizers()["refl"]
        if any(r != uniform for r in realizers):
            raise SynthesisFailure("bounded universal needs a uniform realizer")
        return App(K, uniform)
    raise SynthesisFailure(f"outside the synthesizable family: {phi!r}")


def _entries(a: RSet | LabeledRSet):
    return list(a.elements)


# ---------------------------------------------------------------------------
# Hand-buildable equality instances (shared-child families)


def collision_instance(
    rng: random.Random, base: RSet, extra_keys: int = 2
) -> tuple[RSet, RSet, Term, Term]:
    """An instance (a, b, f, g) for the key-collision check.

    ``a`` is a one-entry injectively presented set containing the singleton
    of ``base``; ``b`` duplicates that child under one shared key, with
    variations that stay realizably equal through a single uniform witness.
    """
    refl = equality_realizers()["refl"]
    single = rset((numeral(0), base))
    variants = [single]
    keys = rng.sample(range(1, 9), extra_keys)
    for k in keys:
        variants.append(rset((numeral(0), base), (numeral(k), base)))
    g = rng.choice([K, S, numeral(7)])
    b = rset(*[(g, v) for v in variants])
    a_key = numeral(rng.randint(0, 3))
    a = rset((a_key, single))
    w = nf(app(PAIR, lam([0], app(PAIR, numeral(0), refl)), lam([0], app(PAIR, numeral(0), refl))))
    f = nf(
        app(
            PAIR,
            lam([0], app(PAIR, g, refl)),
            lam([0], app(PAIR, a_key, w)),
        )
    )
    return a, b, f, g
