"""Finite-rank realizability sets, plain and labeled.

A plain set is a finite collection of (realizer, child) pairs; a labeled set
carries an extra binary label per entry.  Both are immutable and
well-founded by construction.  Realizers are normal forms of the term
algebra; equality between realizers is syntactic, so two extensionally equal
realizer keys are distinct keys.

The labeled world supports a permutation action (through the term
automorphisms), a label-erasing projection into the plain world, and the two
symmetry predicates used by the checker: partly symmetric (hereditarily, all
0-labelled children qualify) and completely symmetric (hereditarily, all
labels are 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..reduction import Reducer, red
from ..stdlib import numeral, numeral_value
from ..terms import App, Perm, Term, apply_automorphism, contains_oracle, symbol_support


class ModelError(ValueError):
    """Ill-formed set, formula, or check precondition."""


@dataclass(frozen=True)
class RSet:
    """Finite set of (realizer, child) pairs."""

    elements: frozenset[tuple[Term, "RSet"]]

    def __post_init__(self) -> None:
        for realizer, child in self.elements:
            if not realizer.normal:
                raise ModelError(f"realizer {realizer!r} is not a normal form")
            if not isinstance(child, RSet):
                raise ModelError("children of a plain set must be plain sets")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"RSet({len(self.elements)} elems, rank {rank(self)})"


@dataclass(frozen=True)
class LabeledRSet:
    """Finite set of (label, realizer, child) triples with binary labels."""

    elements: frozenset[tuple[int, Term, "LabeledRSet"]]

    def __post_init__(self) -> None:
        for label, realizer, child in self.elements:
            if label not in (0, 1):
                raise ModelError(f"labels must be 0 or 1, got {label}")
            if not realizer.normal:
                raise ModelError(f"realizer {realizer!r} is not a normal form")
            if not isinstance(child, LabeledRSet):
                raise ModelError("children of a labeled set must be labeled sets")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"LabeledRSet({len(self.elements)} elems, rank {rank(self)})"


AnySet = RSet | LabeledRSet

EMPTY = RSet(frozenset())
EMPTY_LABELED = LabeledRSet(frozenset())


def rset(*pairs: tuple[Term, RSet]) -> RSet:
    return RSet(frozenset(pairs))


def lset(*triples: tuple[int, Term, LabeledRSet]) -> LabeledRSet:
    return LabeledRSet(frozenset(triples))


# ---------------------------------------------------------------------------
# Rank, projection, action, support
#
# These are pure functions of immutable values and are consulted on every
# checker step, where shared substructure (the canonical numerals above all)
# would otherwise be retraversed exponentially often; hence the caches.


@lru_cache(maxsize=None)
def rank(a: AnySet) -> int:
    """Well-founded height: 0 for the empty set, else max child rank + 1."""
    if isinstance(a, RSet):
        return max((rank(c) + 1 for _, c in a), default=0)
    return max((rank(c) + 1 for _, _, c in a), default=0)


@lru_cache(maxsize=None)
def project(a: LabeledRSet) -> RSet:
    """Forget the labels, hereditarily.  Rank is preserved."""
    return RSet(frozenset((e, project(b)) for _, e, b in a))


def lift_perm(p: Perm, a: LabeledRSet) -> LabeledRSet:
    """The permutation action: map every realizer and child, keep labels."""
    return LabeledRSet(
        frozenset((s, apply_automorphism(p, e), lift_perm(p, b)) for s, e, b in a)
    )


def rset_perm(p: Perm, a: RSet) -> RSet:
    """The same action on plain sets."""
    return RSet(frozenset((apply_automorphism(p, e), rset_perm(p, b)) for e, b in a))


@lru_cache(maxsize=None)
def support(a: AnySet) -> frozenset[int]:
    """Atom indices occurring hereditarily in realizers, including oracle
    permutation supports.

    A permutation fixing this set pointwise fixes ``a`` provided no oracle
    constant occurs in any realizer (an oracle is moved by every non-trivial
    permutation, whatever its support); :func:`has_oracle` detects that case.
    """
    out: set[int] = set()
    if isinstance(a, RSet):
        for e, b in a:
            out |= symbol_support(e) | support(b)
    else:
        for _, e, b in a:
            out |= symbol_support(e) | support(b)
    return frozenset(out)


@lru_cache(maxsize=None)
def has_oracle(a: AnySet) -> bool:
    if isinstance(a, RSet):
        return any(contains_oracle(e) or has_oracle(b) for e, b in a)
    return any(contains_oracle(e) or has_oracle(b) for _, e, b in a)


# ---------------------------------------------------------------------------
# Symmetry and presentation predicates


@dataclass(frozen=True)
class NormalFilterSpec:
    """The subgroup filter generated by the stabilizers of single atoms up to
    ``generator_bound`` (None: all atoms).

    Because the filter is closed under conjugation, any single-atom generator
    already yields the stabilizer of every finite atom set: membership of a
    stabilizer reduces to "the stabilized object has finite support", which
    every value here has.  The bound is retained for exhibits and tests; the
    substantive content of partial symmetry is the hereditary label
    condition.
    """

    generator_bound: int | None = None

    def admits_support(self, atoms: frozenset[int]) -> bool:
        return True  # every finite support qualifies; see class docstring


def is_partly_symmetric(a: LabeledRSet, gamma: NormalFilterSpec | None = None) -> bool:
    """Hereditary condition: every 0-labelled child is itself partly
    symmetric (the stabilizer condition is automatic; see NormalFilterSpec)."""
    gamma = gamma or NormalFilterSpec()
    if not gamma.admits_support(support(a)):
        return False
    return all(is_partly_symmetric(b, gamma) for s, _, b in a if s == 0)


def is_completely_symmetric(a: LabeledRSet) -> bool:
    """Every entry is 0-labelled with a completely symmetric child."""
    return all(s == 0 and is_completely_symmetric(b) for s, _, b in a)


def validate_injectively_presented(a: RSet) -> bool:
    """Hereditarily, equal realizer keys determine equal children."""
    seen: dict[Term, RSet] = {}
    for e, b in a:
        other = seen.get(e)
        if other is not None and other != b:
            return False
        seen[e] = b
    return all(validate_injectively_presented(b) for _, b in a)


# ---------------------------------------------------------------------------
# Canonical representations


@lru_cache(maxsize=None)
def canonical_numeral(n: int) -> RSet:
    """The set-level numeral: entries (numeral m, canonical m) for m < n."""
    if n < 0:
        raise ModelError(f"canonical numerals need n >= 0, got {n}")
    return RSet(frozenset((numeral(m), canonical_numeral(m)) for m in range(n)))


@lru_cache(maxsize=None)
def canonical_numeral_labeled(n: int) -> LabeledRSet:
    return LabeledRSet(
        frozenset((0, numeral(m), canonical_numeral_labeled(m)) for m in range(n))
    )


def omega_truncation(bound: int) -> RSet:
    """The naturals object cut off below ``bound`` (the full object is
    infinite; consumers must treat verdicts as relative to this cut)."""
    return RSet(frozenset((numeral(n), canonical_numeral(n)) for n in range(bound)))


def omega_truncation_labeled(bound: int) -> LabeledRSet:
    return LabeledRSet(
        frozenset((0, numeral(n), canonical_numeral_labeled(n)) for n in range(bound))
    )


def unordered_pair(a: RSet, b: RSet) -> RSet:
    """{a, b} keyed by the two boolean tags."""
    return RSet(frozenset(((numeral(0), a), (numeral(1), b))))


def internal_pair(a: RSet, b: RSet) -> RSet:
    """Ordered pair {{a}, {a, b}} built from tagged unordered pairs.

    Keys stay distinct at every level, so the pair of two injectively
    presented sets is injectively presented.
    """
    return unordered_pair(unordered_pair(a, a), unordered_pair(a, b))


def unordered_pair_labeled(a: LabeledRSet, b: LabeledRSet) -> LabeledRSet:
    return LabeledRSet(frozenset(((0, numeral(0), a), (0, numeral(1), b))))


def internal_pair_labeled(a: LabeledRSet, b: LabeledRSet) -> LabeledRSet:
    return unordered_pair_labeled(unordered_pair_labeled(a, a), unordered_pair_labeled(a, b))


def graph_rset(
    f: Term, trunc: int, cap: int, reducer: Reducer | None = None
) -> RSet:
    """The graph of a numeral-to-numeral function as a set of ordered pairs,
    keyed by input numerals and truncated below ``trunc``."""
    entries = []
    for n in range(trunc):
        value = red(App(f, numeral(n)), cap, reducer).value_or_none()
        m = None if value is None else numeral_value(value)
        if m is None:
            raise ModelError(
                f"graph construction needs numeral values; input {n} gave {value!r}"
            )
        entries.append(
            (numeral(n), internal_pair(canonical_numeral(n), canonical_numeral(m)))
        )
    return RSet(frozenset(entries))


def graph_rset_labeled(
    f: Term, trunc: int, cap: int, reducer: Reducer | None = None
) -> LabeledRSet:
    plain = graph_rset(f, trunc, cap, reducer)
    return label_all(plain)


@lru_cache(maxsize=None)
def label_all(a: RSet) -> LabeledRSet:
    """View a plain set in the labeled world with every label 0."""
    return LabeledRSet(frozenset((0, e, label_all(b)) for e, b in a))
