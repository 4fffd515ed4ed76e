import pytest

from pcaforge import modelio, sexpr
from pcaforge.sexpr import Symbol
from pcaforge.stdlib import numeral
from pcaforge.terms import K, S
from pcaforge.realizability import (
    And,
    BoundedForall,
    BVar,
    Eq,
    Implies,
    Mem,
    ModelError,
    Param,
    Verdict,
    canonical_numeral,
    canonical_numeral_labeled,
    lset,
    rset,
)


class TestSexpr:
    def test_roundtrip(self):
        forms = [
            [Symbol("rset"), [Symbol("pair"), "S K K", [Symbol("rset")]]],
            [Symbol("verdict"), Symbol("REALIZED")],
            [Symbol("nested"), 1, -4, "with \"quotes\" and \\backslash"],
        ]
        for form in forms:
            assert sexpr.loads_one(sexpr.dumps(form)) == form

    def test_comments_and_whitespace(self):
        text = "; a comment\n ( a 1 \"s\" ) ; trailing\n(b)"
        forms = sexpr.loads(text)
        assert forms == [[Symbol("a"), 1, "s"], [Symbol("b")]]

    def test_errors(self):
        with pytest.raises(sexpr.SexprError):
            sexpr.loads("(a")
        with pytest.raises(sexpr.SexprError):
            sexpr.loads(")")
        with pytest.raises(sexpr.SexprError):
            sexpr.loads('"unterminated')
        with pytest.raises(sexpr.SexprError):
            sexpr.loads_one("(a) (b)")


class TestSetCodec:
    def test_plain_roundtrip(self):
        for a in (
            canonical_numeral(3),
            rset((K, canonical_numeral(1)), (S, canonical_numeral(0))),
        ):
            assert modelio.decode_set(modelio.encode_rset(a)) == a

    def test_labeled_roundtrip(self):
        a = lset((0, K, canonical_numeral_labeled(1)), (1, numeral(2), canonical_numeral_labeled(0)))
        assert modelio.decode_set(modelio.encode_lrset(a)) == a

    def test_mixing_rejected(self):
        with pytest.raises(ModelError):
            modelio.decode_set(
                [Symbol("rset"), [Symbol("pair"), "K", [Symbol("lrset")]]]
            )


class TestFormulaCodec:
    def test_roundtrip(self):
        a = canonical_numeral(1)
        phi = And(
            Eq(Param(a), Param(a)),
            BoundedForall(Param(a), Implies(Mem(BVar(0), Param(a)), Eq(BVar(0), BVar(0)))),
        )
        encoded = modelio.encode_formula(phi)
        assert modelio.decode_formula(encoded) == phi

    def test_text_form(self):
        text = "(ball (rset) (eq (var 0) (var 0)))"
        phi = modelio.decode_formula(sexpr.loads_one(text))
        assert isinstance(phi, BoundedForall)

    def test_verdicts(self):
        for v in (
            Verdict("realized"),
            Verdict("not-realized"),
            Verdict("unknown", "budget", "cap 10"),
        ):
            assert modelio.decode_verdict(modelio.encode_verdict(v)) == v


class TestRequests:
    def test_defs_and_checks(self):
        text = """
        (def zero (rset))
        (def one (rset (pair "#0" zero)))
        (check "$p #0 K" (mem zero one))
        (check0ip "$refl" (eq one one))
        """
        requests = modelio.load_requests(text)
        assert len(requests) == 2
        assert requests[0].relation == "check"
        assert isinstance(requests[0].formula, Mem)

    def test_collision_form(self):
        text = """
        (def a (rset (pair "#0" (rset))))
        (def b (rset (pair "K" (rset))))
        (collision a b "$refl" "K")
        """
        (request,) = modelio.load_requests(text)
        assert isinstance(request, modelio.CollisionRequest)

    def test_bad_forms(self):
        with pytest.raises(ModelError):
            modelio.load_requests("(frobnicate)")
        with pytest.raises(ModelError):
            modelio.load_requests("(check (mem a b))")
        with pytest.raises(ModelError):
            modelio.load_requests('(check "K" (mem missing missing))')
