import pytest

from pcaforge.gadgets import (
    GadgetError,
    HaltingProfile,
    atom_preservation_probe,
    build_halt_detector,
    build_stage_indicator,
    build_stage_loop,
    build_stage_stepper,
    build_staged_probe,
    build_tagged_detector,
    probe_type1,
    probe_type2_identity,
)
from pcaforge.reduction import Reducer, red
from pcaforge.stdlib import FST, I, PAIR, SUCC, lam, nf, numeral, numeral_value
from pcaforge.syntax import parse
from pcaforge.terms import App, Atom, K, Oracle, Perm, Var, app, apply_automorphism, atoms_of, subst

CAP = 100_000
H3 = HaltingProfile.halts_at(3)
H0 = HaltingProfile.halts_at(0)
NEVER = HaltingProfile.never()


class TestProfiles:
    def test_spec_strings(self):
        assert HaltingProfile.from_spec("halts@4") == HaltingProfile.halts_at(4)
        assert HaltingProfile.from_spec("never") == NEVER
        with pytest.raises(GadgetError):
            HaltingProfile.from_spec("sometimes")

    def test_monotone(self):
        for k in range(10):
            assert H3.halts_by(0, k) == (k >= 3)
        assert not any(NEVER.halts_by(0, k) for k in range(10))

    def test_from_predicate(self):
        profile = HaltingProfile.from_predicate(lambda m, k: k >= 2, 0, 10)
        assert profile == HaltingProfile.halts_at(2)
        with pytest.raises(GadgetError):
            HaltingProfile.from_predicate(lambda m, k: k == 2, 0, 10)  # not monotone
        with pytest.raises(GadgetError):
            HaltingProfile.from_predicate(lambda m, k: False, 0, 10)  # no threshold


class TestStageIndicator:
    def test_before_and_after(self):
        g = build_stage_indicator(H3, 0)
        discard = app(K, App(K, numeral(0)))
        assert red(App(g, numeral(2)), CAP).value == discard
        assert red(App(g, numeral(5)), CAP).value == I

    def test_never(self):
        g = build_stage_indicator(NEVER, 0)
        assert red(App(g, numeral(100)), CAP).value == app(K, App(K, numeral(0)))


class TestStageStepper:
    def test_halted_branch(self):
        u = build_stage_stepper(H3, 0)
        assert red(App(u, numeral(3)), CAP).value == App(K, I)
        # K I applied to anything gives the identity
        assert red(app(u, numeral(3), Atom(1)), CAP).value == I

    def test_running_branch(self):
        u = build_stage_stepper(H3, 0)
        assert numeral_value(red(app(u, numeral(1), I), CAP).value) == 2

    def test_never_running(self):
        u = build_stage_stepper(NEVER, 0)
        assert numeral_value(red(app(u, numeral(9), I), CAP).value) == 10


class TestStageLoop:
    def test_halts_at_zero(self):
        v = build_stage_loop(H0, 0)
        assert red(App(v, numeral(0)), 10_000).value == I

    def test_halts_at_three(self):
        v = build_stage_loop(H3, 0)
        out = red(App(v, numeral(0)), 10**5)
        assert out.value_or_none() == I

    def test_never_exhausts_increasing_caps(self):
        v = build_stage_loop(NEVER, 0)
        reducer = Reducer()
        for cap in (1000, 10_000):
            assert red(App(v, numeral(0)), cap, reducer).exhausted


class TestDetectors:
    def test_halt_detector_ignores_argument(self):
        t = build_halt_detector(H0, 0)
        for r in (Atom(9), K, numeral(4)):
            assert red(App(t, r), 10_000).value == I
        assert atoms_of(t) == frozenset()

    def test_halt_detector_diverges_with_never(self):
        t = build_halt_detector(NEVER, 0)
        assert red(App(t, Atom(1)), 5000, Reducer()).exhausted

    def test_tagged_detector_atoms(self):
        tp = build_tagged_detector(H0, 0, 5)
        assert atoms_of(tp) == {5}
        assert not tp.closed  # oracle position is open

    def test_tagged_detector_value(self):
        tp = subst(build_tagged_detector(H0, 0, 5), 0, Oracle(Perm.identity()))
        assert numeral_value(red(App(tp, Atom(9)), 10_000).value) == 5
        tp2 = subst(build_tagged_detector(H0, 0, 5), 0, Oracle(Perm.swap(5, 6)))
        assert numeral_value(red(App(tp2, Atom(9)), 10_000).value) == 6

    def test_total_definedness_is_argument_independent(self):
        t = build_halt_detector(H3, 0)
        outcomes = {red(App(t, r), 10**5, Reducer()).exhausted for r in (Atom(1), K, numeral(2))}
        assert outcomes == {False}


class TestStagedProbe:
    def test_pre_and_post_halt(self):
        f = build_staged_probe(H3, 0, 5, Perm.identity())
        for level in range(3):
            assert red(App(f, numeral(level)), CAP).value == numeral(0)
        for level in range(3, 8):
            assert red(App(f, numeral(level)), CAP).value == numeral(5)

    def test_oracle_variant(self):
        f = build_staged_probe(H3, 0, 5, Perm.swap(5, 6))
        assert red(App(f, numeral(4)), CAP).value == numeral(6)

    def test_never_is_constant_zero(self):
        f = build_staged_probe(NEVER, 0, 5, Perm.identity())
        for level in range(0, 21, 4):
            assert red(App(f, numeral(level)), CAP).value == numeral(0)

    def test_is_normal_form(self):
        assert build_staged_probe(H3, 0, 5, Perm.identity()).normal

    def test_equivariance(self):
        f_id = build_staged_probe(H3, 0, 5, Perm.identity())
        swapped = apply_automorphism(Perm.swap(5, 6), f_id)
        # the image is the probe built with the swapped atom and conjugated oracle
        rebuilt = build_staged_probe(H3, 0, 6, Perm.swap(5, 6))
        assert swapped == rebuilt


class TestProbeType1:
    def test_probe_family_passes(self):
        for profile in (H0, H3, NEVER):
            f = build_staged_probe(profile, 0, 5, Perm.identity())
            assert probe_type1(f, 20, CAP).consistent

    def test_k_fails_at_zero(self):
        report = probe_type1(K, 5, CAP)
        assert not report.consistent
        assert report.witness[0] == 0

    def test_succ_passes(self):
        assert probe_type1(SUCC, 20, CAP).consistent


class TestProbeType2Identity:
    def test_literal_identity(self):
        f = build_staged_probe(H3, 0, 5, Perm.identity())
        report = probe_type2_identity(I, [SUCC, f], 10, CAP)
        assert report.consistent

    def test_shift_wrapper_fails(self):
        shift = lam([0, 1], App(SUCC, App(Var(0), Var(1))))
        report = probe_type2_identity(shift, [SUCC], 10, CAP)
        assert not report.consistent
        assert report.witness[0] == 0

    def test_pair_projection_identity(self):
        e = lam([0], App(FST, app(PAIR, Var(0), Var(0))))
        assert probe_type2_identity(e, [SUCC], 10, CAP).consistent

    def test_rejects_bad_probe(self):
        with pytest.raises(GadgetError):
            probe_type2_identity(I, [K], 5, CAP)


class TestAtomPreservation:
    def test_identity_preserves_atom(self):
        report = atom_preservation_probe(
            I, H0, 0, 5, Perm.identity(), Perm.swap(5, 6), CAP
        )
        assert report.reduced
        assert report.atom_present
        assert report.variants_equal is False

    def test_constant_discards(self):
        e = App(K, numeral(0))
        report = atom_preservation_probe(
            e, H0, 0, 5, Perm.identity(), Perm.swap(5, 6), CAP
        )
        assert report.reduced
        assert report.value == numeral(0)
        assert not report.atom_present
        assert report.variants_equal is True

    def test_applier_pre_halt(self):
        # applying the probe to a pre-halt stage yields a bare numeral:
        # no atom, both oracle variants agree (this e is not an identity)
        e = lam([0], App(Var(0), numeral(1)))
        report = atom_preservation_probe(
            e, H3, 0, 5, Perm.identity(), Perm.swap(5, 6), CAP
        )
        assert report.reduced
        assert report.value == numeral(0)
        assert not report.atom_present
        assert report.variants_equal is True

    def test_applier_post_halt(self):
        # past the halting stage the two variants expose their oracles
        e = lam([0], App(Var(0), numeral(7)))
        report = atom_preservation_probe(
            e, H3, 0, 5, Perm.identity(), Perm.swap(5, 6), CAP
        )
        assert report.reduced
        assert report.value == numeral(5)
        assert not report.atom_present
        assert report.variants_equal is False

    def test_preconditions(self):
        with pytest.raises(GadgetError):
            atom_preservation_probe(I, H0, 0, 5, Perm.identity(), Perm.identity(), CAP)
        with pytest.raises(GadgetError):
            atom_preservation_probe(
                App(K, Oracle(Perm.identity())), H0, 0, 5, Perm.identity(), Perm.swap(5, 6), CAP
            )
