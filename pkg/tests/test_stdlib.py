import random

import pytest

from pcaforge.generators import random_normal_term, random_perm, random_term
from pcaforge.reduction import BudgetExhausted, Reduced, Reducer, red
from pcaforge.stdlib import (
    FALSE,
    FST,
    I,
    ISZERO,
    PAIR,
    PRED,
    SND,
    SUCC,
    TRUE,
    BoundedCase,
    Comp,
    PrimRec,
    Proj,
    StdlibError,
    Succ,
    Zero,
    bracket_abstract,
    compile_primrec,
    eqnat_term,
    eval_prfun,
    fixpoint_y,
    fixpoint_yp,
    lam,
    nf,
    numeral,
    numeral_value,
    pair_value,
    std_env,
)
from pcaforge.terms import App, Atom, K, S, Var, app, apply_automorphism, atoms_of, subst

CAP = 100_000


class TestBracketAbstraction:
    def test_identity(self):
        assert bracket_abstract(0, Var(0)) == app(S, K, K)

    def test_constant_leaf(self):
        assert bracket_abstract(0, K) == App(K, K)

    def test_self_application(self):
        t = bracket_abstract(0, App(Var(0), Var(0)))
        assert red(App(t, K), CAP).value == App(K, K)

    def test_applications_always_split(self):
        # even a closed application body goes through the S rule
        t = bracket_abstract(0, App(K, K))
        assert t == app(S, App(K, K), App(K, K))

    def test_result_is_normal_and_variable_free(self):
        from pcaforge.terms import Var as V, subterms

        rng = random.Random(3)
        for _ in range(100):
            body = random_term(rng, size=rng.randint(1, 8), vars_=2)
            out = bracket_abstract(0, body)
            assert out.normal
            assert V(0) not in set(subterms(out))

    def test_simulation(self):
        rng = random.Random(5)
        for _ in range(150):
            body = random_term(rng, size=rng.randint(1, 7), vars_=1)
            a = random_normal_term(rng, size=rng.randint(1, 4))
            lhs = red(App(bracket_abstract(0, body), a), 20_000, Reducer())
            rhs = red(subst(body, 0, a), 20_000, Reducer())
            assert lhs.exhausted == rhs.exhausted
            assert lhs.value_or_none() == rhs.value_or_none()

    def test_two_variable_simulation(self):
        rng = random.Random(7)
        for _ in range(100):
            body = random_term(rng, size=rng.randint(1, 6), vars_=2)
            a = random_normal_term(rng, size=3)
            b = random_normal_term(rng, size=3)
            fn = lam([0, 1], body)
            assert App(fn, a).normal is False or True  # partial app may be redex or not
            partial = red(App(fn, a), 20_000)
            assert isinstance(partial, Reduced)  # partial applications defined
            lhs = red(App(partial.value, b), 20_000, Reducer())
            rhs = red(subst(subst(body, 0, a), 1, b), 20_000, Reducer())
            assert lhs.exhausted == rhs.exhausted
            assert lhs.value_or_none() == rhs.value_or_none()


class TestBooleansAndPairs:
    def test_booleans(self):
        a, b = Atom(1), Atom(2)
        assert red(app(TRUE, a, b), CAP).value == a
        assert red(app(FALSE, a, b), CAP).value == b

    def test_pairing_laws(self):
        rng = random.Random(11)
        for _ in range(60):
            a = random_normal_term(rng, size=rng.randint(1, 5))
            b = random_normal_term(rng, size=rng.randint(1, 5))
            pr = red(app(PAIR, a, b), 10_000).value
            assert pr == pair_value(a, b)
            assert red(App(FST, pr), 10_000).value == a
            assert red(App(SND, pr), 10_000).value == b


class TestNumerals:
    def test_roundtrip(self):
        for n in range(40):
            assert numeral_value(numeral(n)) == n

    def test_zero_is_identity(self):
        assert numeral(0) == app(S, K, K)

    def test_non_numerals(self):
        assert numeral_value(Atom(1)) is None
        assert numeral_value(K) is None
        assert numeral_value(app(PAIR, K, K)) is None

    def test_pairwise_distinct(self):
        values = [numeral(n) for n in range(33)]
        assert len(set(values)) == 33

    def test_numeral_laws(self):
        assert red(App(ISZERO, numeral(0)), CAP).value == TRUE
        for n in range(1, 33):
            assert red(App(ISZERO, numeral(n)), CAP).value == FALSE
            assert red(App(PRED, numeral(n)), CAP).value == numeral(n - 1)
            assert red(App(SUCC, numeral(n - 1)), CAP).value == numeral(n)

    def test_eqnat(self):
        eqn = eqnat_term()
        for n in range(0, 33, 4):
            for m in range(0, 33, 4):
                want = TRUE if n == m else FALSE
                assert red(app(eqn, numeral(n), numeral(m)), CAP).value == want


class TestFixpoints:
    def test_delayed_always_defined(self):
        rng = random.Random(13)
        yp = fixpoint_yp()
        for _ in range(60):
            f = random_normal_term(rng, size=rng.randint(1, 6))
            assert isinstance(red(App(yp, f), CAP), Reduced)

    def test_delayed_unfolding_law(self):
        rng = random.Random(17)
        yp = fixpoint_yp()
        for _ in range(60):
            f = random_normal_term(rng, size=rng.randint(1, 5))
            e = random_normal_term(rng, size=rng.randint(1, 4))
            w = red(App(yp, f), CAP).value
            lhs = red(App(w, e), 20_000, Reducer())
            rhs = red(app(f, w, e), 20_000, Reducer())
            assert lhs.exhausted == rhs.exhausted
            assert lhs.value_or_none() == rhs.value_or_none()

    def test_plain_fixpoint_law_is_vacuous_here(self):
        # under innermost evaluation the recursion argument always reduces
        # first, so both sides of the unfolding law are undefined; the law
        # (agreement) still holds
        y = fixpoint_y()
        f = App(K, Atom(1))
        assert red(App(y, f), 3000, Reducer()).exhausted
        assert red(App(f, App(y, f)), 3000, Reducer()).exhausted

    def test_plain_fixpoint_agreement(self):
        rng = random.Random(19)
        y = fixpoint_y()
        for _ in range(30):
            f = random_normal_term(rng, size=rng.randint(1, 5))
            lhs = red(App(y, f), 2000, Reducer())
            rhs = red(App(f, App(y, f)), 2000, Reducer())
            assert lhs.exhausted == rhs.exhausted
            assert lhs.value_or_none() == rhs.value_or_none()


ADD = PrimRec(Proj(1, 0), Comp(Succ(), (Proj(3, 1),)))
MUL = PrimRec(Zero(), Comp(ADD, (Proj(3, 1), Proj(3, 2))))


class TestPrimRec:
    def test_succ(self):
        t = compile_primrec(Succ())
        assert red(App(t, numeral(3)), CAP).value == numeral(4)

    def test_zero(self):
        t = compile_primrec(Zero())
        assert red(App(t, numeral(5)), CAP).value == numeral(0)

    def test_proj(self):
        t = compile_primrec(Proj(3, 1))
        assert red(app(t, Atom(1), Atom(2), Atom(3)), CAP).value == Atom(2)

    def test_add_against_host(self):
        t = compile_primrec(ADD)
        for n, m in [(0, 0), (2, 3), (5, 1), (4, 4)]:
            got = red(app(t, numeral(n), numeral(m)), CAP).value
            assert numeral_value(got) == eval_prfun(ADD, (n, m)) == n + m

    def test_mul_against_host(self):
        t = compile_primrec(MUL)
        for n, m in [(0, 3), (2, 3), (3, 2)]:
            got = red(app(t, numeral(n), numeral(m)), 400_000).value
            assert numeral_value(got) == eval_prfun(MUL, (n, m)) == n * m

    def test_bounded_case(self):
        f = BoundedCase.of({0: 1}, 0)
        t = compile_primrec(f)
        assert red(App(t, numeral(0)), CAP).value == numeral(1)
        assert red(App(t, numeral(9)), CAP).value == numeral(0)

    def test_bounded_case_sparse(self):
        f = BoundedCase.of({1: 5, 4: 2}, 7)
        t = compile_primrec(f)
        for n in range(8):
            got = numeral_value(red(App(t, numeral(n)), CAP).value)
            assert got == eval_prfun(f, (n,))

    def test_arity_mismatch_rejected(self):
        with pytest.raises(StdlibError):
            Comp(Succ(), (Proj(2, 0), Proj(3, 1)))
        with pytest.raises(StdlibError):
            PrimRec(Proj(1, 0), Proj(2, 1))
        with pytest.raises(StdlibError):
            Proj(2, 2)

    def test_compiled_terms_are_pure(self):
        for f in (ADD, BoundedCase.of({0: 1}, 0), Succ(), Zero(), Proj(2, 1)):
            t = compile_primrec(f)
            assert t.normal and not atoms_of(t) and t.closed


class TestStdEnv:
    def test_members_fixed_by_automorphisms(self):
        rng = random.Random(23)
        for name, member in std_env().items():
            assert member.normal, name
            assert not atoms_of(member), name
            for _ in range(5):
                assert apply_automorphism(random_perm(rng), member) == member

    def test_expected_names(self):
        env = std_env()
        for name in ("true", "false", "p", "p0", "p1", "y", "yp", "succ", "pred",
                     "iszero", "eqnat", "refl", "sym", "trans"):
            assert name in env
