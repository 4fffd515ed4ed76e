"""Combinatory terms with inert atoms and max-atom oracle constants.

The term language has the combinators S and K, free variables ``x0, x1, ...``,
atoms ``a1, a2, ...`` (indexed from 1), oracle constants ``z[...]`` carrying a
finitely supported permutation of the positive naturals, and left-associative
application.  Terms are immutable; structural flags (normal form, closedness,
atom content) and the hash are computed once at construction so that the
reduction engine can consult them in O(1).

An oracle constant, applied to a closed normal argument, rewrites to the
numeral of the largest image under its permutation of any atom index occurring
in the argument (0 when no atom occurs).  That rule shapes the normal-form
predicate here: a term is normal when it contains no two-argument K spine, no
three-argument S spine, and no oracle applied to a closed normal argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class TermError(ValueError):
    """Malformed term-level input (bad permutation, bad atom index, ...)."""


# ---------------------------------------------------------------------------
# Finitely supported permutations of the positive naturals


@dataclass(frozen=True)
class Perm:
    """A bijection of {1, 2, ...} that moves only finitely many points.

    Stored canonically as a sorted tuple of (source, target) pairs with no
    fixed points listed, so that two equal permutations are structurally
    equal.  The listed sources and targets must coincide as sets; otherwise
    the identity extension would not be injective.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        seen_src: set[int] = set()
        seen_tgt: set[int] = set()
        for src, tgt in self.pairs:
            if src < 1 or tgt < 1:
                raise TermError(f"permutation indices must be >= 1, got {src}->{tgt}")
            if src in seen_src:
                raise TermError(f"duplicate source {src} in permutation")
            if tgt in seen_tgt:
                raise TermError(f"duplicate target {tgt} in permutation")
            seen_src.add(src)
            seen_tgt.add(tgt)
        if seen_src != seen_tgt:
            missing = sorted(seen_src ^ seen_tgt)
            raise TermError(
                "mapping does not extend to a bijection by the identity "
                f"(unmatched indices {missing}); list complete cycles"
            )
        canonical = tuple(sorted((s, t) for s, t in self.pairs if s != t))
        if canonical != self.pairs:
            object.__setattr__(self, "pairs", canonical)

    @classmethod
    def identity(cls) -> "Perm":
        return cls(())

    @classmethod
    def from_mapping(cls, mapping: dict[int, int] | Iterable[tuple[int, int]]) -> "Perm":
        items = mapping.items() if isinstance(mapping, dict) else mapping
        return cls(tuple(items))

    @classmethod
    def swap(cls, i: int, j: int) -> "Perm":
        if i == j:
            return cls(())
        return cls(((i, j), (j, i)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.pairs)

    def is_identity(self) -> bool:
        return not self.pairs

    def __call__(self, n: int) -> int:
        for src, tgt in self.pairs:
            if src == n:
                return tgt
        return n

    def __str__(self) -> str:
        return "[" + ",".join(f"{s}->{t}" for s, t in self.pairs) + "]"


def perm_invert(p: Perm) -> Perm:
    return Perm(tuple((t, s) for s, t in p.pairs))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Composite permutation applying q first, then p."""
    domain = p.support | q.support
    return Perm(tuple((n, p(q(n))) for n in sorted(domain)))


# ---------------------------------------------------------------------------
# Terms

_EMPTY: frozenset[int] = frozenset()

# Integer variant tags; the reduction engine dispatches on these.
KIND_S = 0
KIND_K = 1
KIND_VAR = 2
KIND_ATOM = 3
KIND_ORACLE = 4
KIND_APP = 5


class Term:
    """Base class; all five variants are immutable and hash-cached."""

    __slots__ = ("_hash", "kind", "normal", "closed", "atoms")

    _hash: int
    kind: int
    normal: bool
    closed: bool
    atoms: frozenset[int]

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return _term_eq(self, other)

    def __repr__(self) -> str:
        return f"<term {print_term(self)}>"


class SComb(Term):
    __slots__ = ()

    def __init__(self) -> None:
        self._hash = hash(("S",))
        self.kind = KIND_S
        self.normal = True
        self.closed = True
        self.atoms = _EMPTY


class KComb(Term):
    __slots__ = ()

    def __init__(self) -> None:
        self._hash = hash(("K",))
        self.kind = KIND_K
        self.normal = True
        self.closed = True
        self.atoms = _EMPTY


class Var(Term):
    __slots__ = ("index",)

    def __init__(self, index: int) -> None:
        if index < 0:
            raise TermError(f"variable index must be >= 0, got {index}")
        self.index = index
        self._hash = hash(("x", index))
        self.kind = KIND_VAR
        self.normal = True
        self.closed = False
        self.atoms = _EMPTY


class Atom(Term):
    __slots__ = ("index",)

    def __init__(self, index: int) -> None:
        if index < 1:
            raise TermError(f"atom index must be >= 1, got {index}")
        self.index = index
        self._hash = hash(("a", index))
        self.kind = KIND_ATOM
        self.normal = True
        self.closed = True
        self.atoms = frozenset((index,))


class Oracle(Term):
    __slots__ = ("perm",)

    def __init__(self, perm: Perm) -> None:
        self.perm = perm
        self._hash = hash(("z", perm.pairs))
        self.kind = KIND_ORACLE
        self.normal = True
        self.closed = True
        # The oracle rule scans for atom occurrences; the constant itself
        # mentions none, whatever its permutation's support.
        self.atoms = _EMPTY


class App(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term) -> None:
        self.left = left
        self.right = right
        h = (left._hash * 1000003 ^ right._hash * 69069) & 0x7FFFFFFFFFFFFFFF
        self._hash = h or 1
        self.kind = KIND_APP
        self.closed = left.closed and right.closed
        self.atoms = left.atoms | right.atoms if left.atoms or right.atoms else _EMPTY
        # A rule fires at the root for the shapes K x y, S x y z, and an
        # oracle on a closed argument; anything else inherits normality.
        if left.normal and right.normal:
            lk = left.kind
            if lk == KIND_APP:
                hk = left.left.kind  # type: ignore[union-attr]
                self.normal = hk != KIND_K and not (
                    hk == KIND_APP and left.left.left.kind == KIND_S  # type: ignore[union-attr]
                )
            elif lk == KIND_ORACLE:
                self.normal = not right.closed
            else:
                self.normal = True
        else:
            self.normal = False


S: Term = SComb()
K: Term = KComb()


def _term_eq(a: Term, b: Term) -> bool:
    if a._hash != b._hash or a.kind != b.kind:
        return False
    if a.kind == KIND_APP:
        # Rebuilt applications usually share their children.
        if a.left is b.left and a.right is b.right:  # type: ignore[union-attr]
            return True
        stack = [(a.right, b.right), (a.left, b.left)]  # type: ignore[union-attr]
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if x._hash != y._hash or x.kind != y.kind:
                return False
            k = x.kind
            if k == KIND_APP:
                if x.left is not y.left or x.right is not y.right:
                    stack.append((x.left, y.left))
                    stack.append((x.right, y.right))
            elif k in (KIND_VAR, KIND_ATOM):
                if x.index != y.index:  # type: ignore[attr-defined]
                    return False
            elif k == KIND_ORACLE:
                if x.perm != y.perm:  # type: ignore[attr-defined]
                    return False
        return True
    if a.kind in (KIND_VAR, KIND_ATOM):
        return a.index == b.index  # type: ignore[attr-defined]
    if a.kind == KIND_ORACLE:
        return a.perm == b.perm  # type: ignore[attr-defined]
    return True  # S and K carry no fields


def app(*terms: Term) -> Term:
    """Left-associative application of one or more terms."""
    if not terms:
        raise TermError("app() needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


# ---------------------------------------------------------------------------
# Structural predicates and maps


def is_normal(t: Term) -> bool:
    """True when no rewrite rule applies anywhere in t."""
    return t.normal


def is_closed(t: Term) -> bool:
    """True when t contains no free variable."""
    return t.closed


def atoms_of(t: Term) -> frozenset[int]:
    """The set of atom indices occurring in t (oracle supports excluded)."""
    return t.atoms


def symbol_support(t: Term) -> frozenset[int]:
    """Atom indices occurring in t plus the supports of its oracle constants.

    This is the index set relevant to whether a permutation can move t at
    all; contrast :func:`atoms_of`, which is what the oracle rule scans.
    """
    out: set[int] = set()
    stack = [t]
    seen: set[int] = set()
    while stack:
        cur = stack.pop()
        if id(cur) in seen:
            continue
        seen.add(id(cur))
        if isinstance(cur, App):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, Atom):
            out.add(cur.index)
        elif isinstance(cur, Oracle):
            out.update(cur.perm.support)
    return frozenset(out)


def contains_oracle(t: Term, perm: Perm | None = None) -> bool:
    """Whether any oracle constant (or the specific one given) occurs in t."""
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, App):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, Oracle):
            if perm is None or cur.perm == perm:
                return True
    return False


def term_size(t: Term) -> int:
    """Number of nodes of t viewed as a tree (shared subterms re-counted)."""
    sizes: dict[int, int] = {}
    order: list[Term] = []
    stack = [t]
    while stack:
        cur = stack.pop()
        if id(cur) in sizes:
            continue
        if isinstance(cur, App):
            l, r = cur.left, cur.right
            if id(l) in sizes and id(r) in sizes:
                sizes[id(cur)] = 1 + sizes[id(l)] + sizes[id(r)]
            else:
                stack.append(cur)
                stack.append(l)
                stack.append(r)
        else:
            sizes[id(cur)] = 1
    return sizes[id(t)]


def subterms(t: Term) -> Iterator[Term]:
    """All subterm occurrences of t, preorder."""
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, App):
            stack.append(cur.right)
            stack.append(cur.left)


def subst(t: Term, index: int, replacement: Term) -> Term:
    """Textual substitution of ``replacement`` for the variable x<index>.

    There are no binders, so the substitution is trivially capture-free.
    """
    memo: dict[int, Term] = {}

    def build(node: Term) -> Term:
        cached = memo.get(id(node))
        if cached is not None:
            return cached
        agenda: list[Term] = [node]
        while agenda:
            cur = agenda[-1]
            if id(cur) in memo:
                agenda.pop()
                continue
            if isinstance(cur, Var):
                memo[id(cur)] = replacement if cur.index == index else cur
                agenda.pop()
            elif isinstance(cur, App):
                l, r = cur.left, cur.right
                if id(l) in memo and id(r) in memo:
                    nl, nr = memo[id(l)], memo[id(r)]
                    memo[id(cur)] = cur if nl is l and nr is r else App(nl, nr)
                    agenda.pop()
                else:
                    agenda.append(l)
                    agenda.append(r)
            else:
                memo[id(cur)] = cur
                agenda.pop()
        return memo[id(node)]

    return build(t)


def apply_automorphism(p: Perm, t: Term) -> Term:
    """The automorphism induced by a permutation of the atom indices.

    S, K and variables are fixed; atom indices map through p; an oracle's
    permutation F becomes F composed with the inverse of p; application is
    preserved.
    """
    if p.is_identity():
        return t
    p_inv = perm_invert(p)
    memo: dict[int, Term] = {}
    agenda: list[Term] = [t]
    while agenda:
        cur = agenda[-1]
        if id(cur) in memo:
            agenda.pop()
            continue
        if isinstance(cur, App):
            l, r = cur.left, cur.right
            if id(l) in memo and id(r) in memo:
                nl, nr = memo[id(l)], memo[id(r)]
                memo[id(cur)] = cur if nl is l and nr is r else App(nl, nr)
                agenda.pop()
            else:
                agenda.append(l)
                agenda.append(r)
        elif isinstance(cur, Atom):
            img = p(cur.index)
            memo[id(cur)] = cur if img == cur.index else Atom(img)
            agenda.pop()
        elif isinstance(cur, Oracle):
            new_perm = perm_compose(cur.perm, p_inv)
            memo[id(cur)] = cur if new_perm == cur.perm else Oracle(new_perm)
            agenda.pop()
        else:
            memo[id(cur)] = cur
            agenda.pop()
    return memo[id(t)]


# ---------------------------------------------------------------------------
# Plain printing (no sugar; the syntax module layers numeral sugar on top)


def print_term(t: Term) -> str:
    """Minimal-parentheses left-associative rendering.

    ``parse(print_term(t))`` recovers t for every term; only right children
    that are themselves applications need parentheses.
    """
    rendered: dict[int, str] = {}
    agenda: list[Term] = [t]
    while agenda:
        cur = agenda[-1]
        if id(cur) in rendered:
            agenda.pop()
            continue
        if isinstance(cur, App):
            l, r = cur.left, cur.right
            if id(l) in rendered and id(r) in rendered:
                right = rendered[id(r)]
                if isinstance(r, App):
                    right = f"({right})"
                rendered[id(cur)] = f"{rendered[id(l)]} {right}"
                agenda.pop()
            else:
                agenda.append(l)
                agenda.append(r)
        else:
            rendered[id(cur)] = _leaf_text(cur)
            agenda.pop()
    return rendered[id(t)]


def _leaf_text(t: Term) -> str:
    if isinstance(t, SComb):
        return "S"
    if isinstance(t, KComb):
        return "K"
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Atom):
        return f"a{t.index}"
    if isinstance(t, Oracle):
        return f"z{t.perm}"
    raise AssertionError(f"unexpected leaf {t!r}")
