import random

import pytest
from hypothesis import given, settings, strategies as st

from pcaforge.generators import random_normal_term, random_perm, random_term
from pcaforge.syntax import ParseError, parse, parse_perm, render
from pcaforge.terms import (
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


# ---------------------------------------------------------------------------
# Permutations


class TestPerm:
    def test_identity_and_swap(self):
        assert Perm.identity().is_identity()
        sw = Perm.swap(1, 2)
        assert sw(1) == 2 and sw(2) == 1 and sw(3) == 3

    def test_canonical_drops_fixed_points(self):
        assert Perm(((5, 5),)) == Perm.identity()
        assert Perm(((2, 1), (1, 2), (3, 3))).pairs == ((1, 2), (2, 1))

    def test_rejects_duplicates_and_nonbijections(self):
        with pytest.raises(TermError):
            Perm(((1, 2), (1, 3), (2, 1), (3, 1)))
        with pytest.raises(TermError):
            Perm(((1, 7),))  # 1 and 7 collide under the identity extension
        with pytest.raises(TermError):
            Perm(((0, 1), (1, 0)))

    def test_compose_is_q_then_p(self):
        p = Perm.swap(1, 2)
        q = Perm.swap(2, 3)
        out = perm_compose(p, q)
        # q sends 1->1,2->3,3->2; then p: 1->2, 3->3, 2->1
        assert out == Perm(((1, 2), (2, 3), (3, 1)))

    def test_swap_composes_to_identity(self):
        sw = Perm.swap(1, 2)
        assert perm_compose(sw, sw) == Perm.identity()

    def test_invert_three_cycle(self):
        cycle = Perm(((1, 2), (2, 3), (3, 1)))
        assert perm_invert(cycle) == Perm(((1, 3), (2, 1), (3, 2)))

    def test_support(self):
        assert Perm.swap(4, 9).support == {4, 9}
        assert perm_compose(Perm.swap(1, 2), Perm.swap(3, 4)).support == {1, 2, 3, 4}


# ---------------------------------------------------------------------------
# Structural predicates


class TestPredicates:
    def test_is_normal_examples(self):
        assert is_normal(parse("K a1"))
        assert not is_normal(parse("K a1 a2"))
        assert is_normal(parse("z[] x0"))  # oracle needs a closed argument
        assert not is_normal(parse("z[] a1"))
        assert not is_normal(app(S, K, K, Atom(1)))
        assert is_normal(app(S, K, K))

    def test_is_normal_covers_subterms(self):
        inner = app(K, Atom(1), Atom(2))
        assert not is_normal(App(K, inner))

    def test_oracle_on_non_normal_closed_argument(self):
        # the argument holds a redex, so the term is non-normal through it
        t = App(Oracle(Perm.identity()), app(K, K, Atom(1)))
        assert not is_normal(t)

    def test_is_closed(self):
        assert is_closed(parse("S K K"))
        assert not is_closed(parse("x3"))
        assert not is_closed(parse("K (z[] a1) x0"))

    def test_atoms_of(self):
        assert atoms_of(parse("K a1 (a3 a1)")) == {1, 3}
        assert atoms_of(parse("z[5->6,6->5]")) == frozenset()
        assert atoms_of(parse("S K K")) == frozenset()

    def test_symbol_support_includes_oracles(self):
        assert symbol_support(parse("z[5->6,6->5] a2")) == {2, 5, 6}

    def test_atom_index_validation(self):
        with pytest.raises(TermError):
            Atom(0)
        with pytest.raises(TermError):
            Var(-1)


# ---------------------------------------------------------------------------
# Automorphisms


class TestAutomorphism:
    def test_moves_atoms(self):
        assert apply_automorphism(Perm.swap(1, 2), parse("a1 a2")) == parse("a2 a1")

    def test_fixes_combinators(self):
        t = parse("S K K")
        for p in (Perm.swap(1, 2), Perm(((1, 2), (2, 3), (3, 1)))):
            assert apply_automorphism(p, t) == t

    def test_oracle_action(self):
        # F is the transposition (1 7); conjugating by swap(1,2) gives the
        # 3-cycle sending 1->2, 2->7, 7->1.
        t = parse("z[1->7,7->1]")
        out = apply_automorphism(Perm.swap(1, 2), t)
        assert out == parse("z[1->2,2->7,7->1]")

    def test_variables_fixed(self):
        assert apply_automorphism(Perm.swap(1, 2), Var(0)) == Var(0)

    def test_action_laws_random(self):
        rng = random.Random(11)
        for _ in range(120):
            t = random_term(rng, size=rng.randint(1, 10))
            p, q = random_perm(rng), random_perm(rng)
            assert apply_automorphism(Perm.identity(), t) == t
            assert apply_automorphism(perm_compose(p, q), t) == apply_automorphism(
                p, apply_automorphism(q, t)
            )
            image = apply_automorphism(p, t)
            assert image.normal == t.normal
            assert image.closed == t.closed
            assert term_size(image) == term_size(t)
            assert atoms_of(image) == frozenset(p(n) for n in atoms_of(t))

    def test_oracle_rule_compatibility(self):
        # acting on the oracle and its argument together preserves the value
        from pcaforge.reduction import red

        rng = random.Random(7)
        for _ in range(40):
            arg = random_normal_term(rng, size=5)
            if not arg.closed:
                continue
            oracle = Oracle(random_perm(rng))
            p = random_perm(rng)
            before = red(App(oracle, arg), 1000).value_or_none()
            after = red(apply_automorphism(p, App(oracle, arg)), 1000).value_or_none()
            assert before == after  # numerals are fixed by the action


# ---------------------------------------------------------------------------
# Substitution


class TestSubst:
    def test_basic(self):
        assert subst(parse("x0 x1"), 0, K) == App(K, Var(1))

    def test_no_occurrence(self):
        t = parse("S K a3")
        assert subst(t, 0, K) is t

    def test_nested(self):
        t = parse("K (x2 x2)")
        assert subst(t, 2, Atom(1)) == parse("K (a1 a1)")


# ---------------------------------------------------------------------------
# Printing and parsing


def _terms(max_leaves=8):
    leaf = st.one_of(
        st.just(S),
        st.just(K),
        st.builds(Atom, st.integers(1, 9)),
        st.builds(Var, st.integers(0, 3)),
        st.builds(lambda i, j: Oracle(Perm.swap(i, j)), st.integers(1, 5), st.integers(1, 5)),
    )
    return st.recursive(leaf, lambda sub: st.builds(App, sub, sub), max_leaves=max_leaves)


class TestSyntax:
    def test_print_examples(self):
        assert print_term(app(S, K, K)) == "S K K"
        assert print_term(Atom(7)) == "a7"
        assert print_term(App(K, App(K, Atom(1)))) == "K (K a1)"

    def test_parse_examples(self):
        assert parse("K a1 a2") == app(K, Atom(1), Atom(2))
        assert parse("z[] (K K a1)") == App(Oracle(Perm.identity()), app(K, K, Atom(1)))
        assert parse("z[1->2,2->1] x0") == App(Oracle(Perm.swap(1, 2)), Var(0))

    @settings(max_examples=200, deadline=None)
    @given(_terms())
    def test_roundtrip_plain(self, t):
        assert parse(print_term(t)) == t

    @settings(max_examples=200, deadline=None)
    @given(_terms())
    def test_roundtrip_sugar(self, t):
        assert parse(render(t)) == t

    def test_sugar_tokens(self):
        from pcaforge.stdlib import I, numeral

        assert parse("I") == I
        assert parse("#4") == numeral(4)
        assert render(numeral(4)) == "#4"
        assert render(numeral(0)) == "I"
        assert parse(render(App(numeral(2), Atom(1)))) == App(numeral(2), Atom(1))

    def test_errors_carry_positions(self):
        with pytest.raises(ParseError) as err:
            parse("K !")
        assert err.value.position == 2
        with pytest.raises(ParseError):
            parse("")
        with pytest.raises(ParseError):
            parse("(K")
        with pytest.raises(ParseError):
            parse("K)")
        with pytest.raises(ParseError):
            parse("z[1->2,1->3,2->1,3->1] K")
        with pytest.raises(ParseError):
            parse("$nosuch")

    def test_parse_perm(self):
        assert parse_perm("[1->2,2->1]") == Perm.swap(1, 2)
        assert parse_perm("[]") == Perm.identity()
        with pytest.raises(ParseError):
            parse_perm("1->2")
