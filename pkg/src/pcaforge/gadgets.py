"""Stage machines over a pluggable halting profile, and bounded probes.

A halting profile is a total, monotone stage predicate: "machine m has
halted by stage k".  It stands in for a concrete machine enumeration; the
builders only ever consume the stage predicate, so a monotone boolean
function captures everything they need while keeping experiments
deterministic.

The constructions:

* ``build_stage_indicator`` (term G): G k reduces to ``K (K #0)`` before the
  halting stage and to the identity after it.
* ``build_stage_stepper`` (term U): U k reduces to ``K I`` once halted, and
  to a function sending its argument z to ``z #(k+1)`` while not halted.
* ``build_stage_loop`` (term V, a literal self-application): V #0 runs the
  stepper through successive stages; it reduces to the identity exactly when
  the profile halts, and exhausts any budget otherwise.
* ``build_halt_detector`` (term T): discards its argument and runs V #0.
* ``build_tagged_detector`` (term T'): like T but, when halting, hands its
  plugged oracle the chosen atom, so the value is the numeral of the
  oracle's image of that atom index.  T' is returned with the oracle
  position as the free variable x0.
* ``build_staged_probe`` (term F): total on numerals for every profile —
  #0 before the halting stage, the oracle image of the atom after it.

The probes at the end are bounded empirical checks of undecidable classes
(functions total on numerals, and extensional identities on them); their
verdicts never claim more than the tested bound and budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .reduction import Reducer, red
from .stdlib import (
    FALSE,
    I,
    ISZERO,
    PAIR,
    PRED,
    BoundedCase,
    StdlibError,
    compile_primrec,
    lam,
    nf,
    numeral,
    numeral_value,
    plug,
)
from .terms import (
    App,
    Atom,
    K,
    Oracle,
    Perm,
    S,
    Term,
    Var,
    app,
    atoms_of,
    contains_oracle,
    subst,
)


class GadgetError(ValueError):
    """Unbuildable gadget or violated probe precondition."""


# ---------------------------------------------------------------------------
# Halting profiles


@dataclass(frozen=True)
class HaltingProfile:
    """Monotone stage predicate with build-time-exact semantics.

    ``halt_stage`` is the least stage at which the machine counts as halted,
    or None for a machine that never halts.  Custom predicates can be wrapped
    with :meth:`from_predicate`, which must be able to certify a threshold
    within the probed bound.
    """

    halt_stage: int | None

    @classmethod
    def halts_at(cls, stage: int) -> "HaltingProfile":
        if stage < 0:
            raise GadgetError(f"halting stage must be >= 0, got {stage}")
        return cls(stage)

    @classmethod
    def never(cls) -> "HaltingProfile":
        return cls(None)

    @classmethod
    def from_predicate(
        cls, halts_by: Callable[[int, int], bool], m: int, scan_bound: int
    ) -> "HaltingProfile":
        """Certify a predicate by scanning stages 0..scan_bound.

        Rejects non-monotone predicates, and predicates with no halt within
        the bound (those cannot be compiled faithfully into a finite term;
        use :meth:`never` when never-halting is known).
        """
        threshold: int | None = None
        for k in range(scan_bound + 1):
            halted = halts_by(m, k)
            if threshold is None and halted:
                threshold = k
            if threshold is not None and not halted:
                raise GadgetError(f"stage predicate is not monotone at stage {k}")
        if threshold is None:
            raise GadgetError(
                f"no halt within scan bound {scan_bound}; "
                "cannot certify a finite threshold"
            )
        return cls(threshold)

    @classmethod
    def from_spec(cls, text: str) -> "HaltingProfile":
        """Parse the surface form 'halts@K' or 'never'."""
        text = text.strip()
        if text == "never":
            return cls.never()
        if text.startswith("halts@"):
            try:
                return cls.halts_at(int(text[len("halts@"):]))
            except ValueError:
                pass
        raise GadgetError(f"bad profile spec {text!r}; expected 'halts@K' or 'never'")

    def halts_by(self, m: int, k: int) -> bool:
        """The stage predicate itself; m is a label only."""
        if k < 0:
            raise GadgetError(f"stage must be >= 0, got {k}")
        return self.halt_stage is not None and k >= self.halt_stage

    def spec(self) -> str:
        return "never" if self.halt_stage is None else f"halts@{self.halt_stage}"


@lru_cache(maxsize=None)
def _halted_flag(halt_stage: int | None) -> Term:
    """Closed term computing 1 on numerals at/after the halt stage, else 0."""
    if halt_stage is None:
        table: dict[int, int] = {}
        default = 0
    else:
        table = {k: 0 for k in range(halt_stage)}
        default = 1
    return compile_primrec(BoundedCase.of(table, default))


# ---------------------------------------------------------------------------
# The stage machines


def build_stage_indicator(profile: HaltingProfile, m: int) -> Term:
    """G with G #l = K (K #0) while not halted by l, and = I after."""
    flag = _halted_flag(profile.halt_stage)
    h, l = Var(0), Var(1)
    body = app(app(ISZERO, App(h, l)), app(K, App(K, numeral(0))), I)
    return plug([0, 1], body, flag)


def build_stage_stepper(profile: HaltingProfile, m: int) -> Term:
    """U with U #k = K I once halted by k, else a function z -> z #(k+1)."""
    flag = _halted_flag(profile.halt_stage)
    h, k = Var(0), Var(1)
    not_halted_branch = app(S, I, App(K, app(PAIR, FALSE, k)))
    body = app(app(ISZERO, App(h, k)), not_halted_branch, App(K, I))
    return plug([0, 1], body, flag)


def build_stage_loop(profile: HaltingProfile, m: int) -> Term:
    """The literal self-application V = W W driving the stepper.

    Not itself a normal form; reduce it (or an application of it) to use it
    as an element of the algebra.
    """
    stepper = build_stage_stepper(profile, m)
    w = plug([0, 1, 2], app(Var(0), Var(2), App(Var(1), Var(1))), stepper)
    return App(w, w)


def build_halt_detector(profile: HaltingProfile, m: int) -> Term:
    """T, an atom-free normal form: T r runs the loop from stage 0 for any r,
    reducing to I iff the profile halts."""
    loop_value = nf(build_stage_loop(profile, m))
    detector = app(S, App(K, loop_value), App(K, numeral(0)))
    assert not atoms_of(detector)
    return detector


def build_tagged_detector(profile: HaltingProfile, m: int, atom: int) -> Term:
    """T' with the oracle position as free variable x0 and exactly the chosen
    atom inside: once the oracle is plugged, T' r reduces (iff halting) to the
    numeral of the oracle's image of the atom index."""
    if atom < 1:
        raise GadgetError(f"atom index must be >= 1, got {atom}")
    detector = build_halt_detector(profile, m)
    tagged = app(S, app(S, detector, App(K, Var(0))), App(K, Atom(atom)))
    assert atoms_of(tagged) == {atom}
    return tagged


def build_staged_probe(profile: HaltingProfile, m: int, atom: int, oracle: Perm) -> Term:
    """F, a normal form total on numerals: F #l = #0 while not halted by l,
    and the oracle image of the atom once halted."""
    indicator = build_stage_indicator(profile, m)
    tagged = subst(build_tagged_detector(profile, m, atom), 0, Oracle(oracle))
    probe = app(S, app(S, indicator, App(K, tagged)), I)
    assert probe.normal
    return probe


# ---------------------------------------------------------------------------
# Bounded probes

CONSISTENT = "consistent-up-to"
COUNTEREXAMPLE = "counterexample-at"


@dataclass(frozen=True)
class ProbeReport:
    """Bounded verdict on an undecidable class membership.

    ``consistent-up-to`` asserts nothing beyond the tested bound and budget;
    a counterexample carries the failing input and what was observed there.
    """

    subject: Term
    verdict: str
    bound: int
    budget: int
    witness: tuple[int, str] | None = None

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT


def probe_type1(t: Term, bound: int, cap: int, reducer: Reducer | None = None) -> ProbeReport:
    """Check that t sends every numeral up to the bound to a numeral."""
    for n in range(bound + 1):
        outcome = red(App(t, numeral(n)), cap, reducer)
        value = outcome.value_or_none()
        if value is None:
            return ProbeReport(t, COUNTEREXAMPLE, bound, cap, (n, f"budget exhausted at {cap}"))
        if numeral_value(value) is None:
            return ProbeReport(t, COUNTEREXAMPLE, bound, cap, (n, "value is not a numeral"))
    return ProbeReport(t, CONSISTENT, bound, cap)


def probe_type2_identity(
    e: Term,
    probes: list[Term],
    bound: int,
    cap: int,
    reducer: Reducer | None = None,
) -> ProbeReport:
    """Check that e behaves extensionally as the identity on the given
    numeral-to-numeral functions, at every input up to the bound."""
    for f in probes:
        pre = probe_type1(f, bound, cap, reducer)
        if not pre.consistent:
            raise GadgetError(
                f"probe {f!r} fails the numeral-totality precheck at {pre.witness}"
            )
    for f in probes:
        ef = red(App(e, f), cap, reducer).value_or_none()
        if ef is None:
            return ProbeReport(e, COUNTEREXAMPLE, bound, cap, (0, "e f exhausted the budget"))
        for n in range(bound + 1):
            lhs = red(App(ef, numeral(n)), cap, reducer).value_or_none()
            rhs = red(App(f, numeral(n)), cap, reducer).value_or_none()
            if lhs is None:
                return ProbeReport(e, COUNTEREXAMPLE, bound, cap, (n, "e f #n exhausted the budget"))
            if lhs != rhs:
                return ProbeReport(
                    e,
                    COUNTEREXAMPLE,
                    bound,
                    cap,
                    (n, f"e f #{n} = #{numeral_value(lhs)} but f #{n} = #{numeral_value(rhs)}"),
                )
    return ProbeReport(e, CONSISTENT, bound, cap)


@dataclass(frozen=True)
class AtomProbeReport:
    """What one experiment observes about atom flow through a term e.

    The three fields an argument can be made from: whether e applied to the
    staged probe reduced at all, whether the tagged atom survives in the
    value, and whether exchanging the probe's oracle for a variant changes
    the value.
    """

    reduced: bool
    value: Term | None
    atom_present: bool
    variants_equal: bool | None
    atoms_in_value: frozenset[int]


def atom_preservation_probe(
    e: Term,
    profile: HaltingProfile,
    m: int,
    atom: int,
    oracle: Perm,
    oracle_variant: Perm,
    cap: int,
    reducer: Reducer | None = None,
) -> AtomProbeReport:
    """Compare e applied to the staged probe under two oracles differing at
    the tagged atom."""
    if oracle(atom) == oracle_variant(atom):
        raise GadgetError("the two oracles must disagree at the tagged atom")
    if contains_oracle(e, oracle):
        raise GadgetError("the primary oracle must not occur in e")
    probe = build_staged_probe(profile, m, atom, oracle)
    variant = build_staged_probe(profile, m, atom, oracle_variant)
    outcome = red(App(e, probe), cap, reducer)
    value = outcome.value_or_none()
    if value is None:
        return AtomProbeReport(False, None, False, None, frozenset())
    variant_value = red(App(e, variant), cap, reducer).value_or_none()
    return AtomProbeReport(
        True,
        value,
        atom in atoms_of(value),
        None if variant_value is None else value == variant_value,
        atoms_of(value),
    )
