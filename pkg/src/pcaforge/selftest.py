"""Built-in invariant suites, runnable from the command line.

Each suite replays a fixed-seed slice of the package's property tests and
returns a pass/fail line; the command-line front end maps any failure to a
nonzero exit.  The environment variable ``PCA_FORGE_MUTATE`` injects a
deliberate fault (currently ``klaw``: the reduction suite expects the wrong
projection) so the harness itself can be checked; the mutation lives
entirely here, never in the engine.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Callable

from .gadgets import HaltingProfile, build_staged_probe, probe_type1
from .generators import (
    SynthesisFailure,
    random_app_tree,
    random_decidable_formula,
    random_normal_term,
    random_perm,
    random_realizer,
    random_rset,
    random_term,
    synthesize_realizer,
)
from .reduction import Reducer, denote, flatten, red
from .stdlib import (
    FALSE,
    FST,
    ISZERO,
    PAIR,
    PRED,
    SND,
    TRUE,
    eqnat_term,
    numeral,
    numeral_value,
    std_env,
)
from .syntax import parse, render
from .terms import (
    App,
    K,
    Perm,
    S,
    app,
    apply_automorphism,
    atoms_of,
    perm_compose,
    term_size,
)
from .realizability import check, eq, equality_realizers


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _mutated(kind: str) -> bool:
    return os.environ.get("PCA_FORGE_MUTATE", "") == kind


def suite_terms(seed: int = 1, cases: int = 150) -> SuiteResult:
    rng = random.Random(seed)
    for _ in range(cases):
        t = random_normal_term(rng, size=rng.randint(1, 10))
        if parse(render(t)) != t or parse(render(t, sugar=False)) != t:
            return SuiteResult("terms", False, f"round-trip failed on {render(t)}")
        p = random_perm(rng)
        q = random_perm(rng)
        lhs = apply_automorphism(perm_compose(p, q), t)
        rhs = apply_automorphism(p, apply_automorphism(q, t))
        if lhs != rhs:
            return SuiteResult("terms", False, "action composition law failed")
        image = apply_automorphism(p, t)
        if image.normal != t.normal or image.closed != t.closed:
            return SuiteResult("terms", False, "action does not preserve flags")
        if term_size(image) != term_size(t):
            return SuiteResult("terms", False, "action does not preserve size")
        if atoms_of(image) != frozenset(p(n) for n in atoms_of(t)):
            return SuiteResult("terms", False, "atom image mismatch")
    return SuiteResult("terms", True, f"{cases} cases")


def suite_reduction(seed: int = 2, cases: int = 120) -> SuiteResult:
    rng = random.Random(seed)
    name = "reduction"
    for _ in range(cases):
        r = random_normal_term(rng, size=rng.randint(1, 6))
        s = random_normal_term(rng, size=rng.randint(1, 6))
        value = red(app(K, r, s), 10_000).value_or_none()
        expected = s if _mutated("klaw") else r
        if value != expected:
            return SuiteResult(name, False, f"k-law failed on {render(r)}, {render(s)}")
        u = random_normal_term(rng, size=rng.randint(1, 4))
        lhs = red(app(S, r, s, u), 10_000, Reducer())
        rhs = red(App(App(r, u), App(s, u)), 10_000, Reducer())
        if lhs.exhausted != rhs.exhausted or lhs.value_or_none() != rhs.value_or_none():
            return SuiteResult(name, False, "s-law disagreement")
        tree = random_app_tree(rng, 4, [r, s, u])
        d = denote(tree, 10_000)
        f = red(flatten(tree), 10_000)
        if d.exhausted != f.exhausted or d.value_or_none() != f.value_or_none():
            return SuiteResult(name, False, "tree denotation disagreement")
        p = random_perm(rng)
        t = random_term(rng, size=rng.randint(1, 8))
        a_out = red(apply_automorphism(p, t), 2_000, Reducer())
        b_out = red(t, 2_000, Reducer())
        if a_out.exhausted != b_out.exhausted:
            return SuiteResult(name, False, "equivariance definedness mismatch")
        if not a_out.exhausted:
            if a_out.value != apply_automorphism(p, b_out.value) or a_out.stage != b_out.stage:
                return SuiteResult(name, False, "equivariance value/stage mismatch")
    return SuiteResult(name, True, f"{cases} cases")


def suite_stdlib(seed: int = 3, cases: int = 60) -> SuiteResult:
    rng = random.Random(seed)
    name = "stdlib"
    env = std_env()
    for member in env.values():
        if not member.normal or atoms_of(member):
            return SuiteResult(name, False, "environment member not a pure normal form")
        p = random_perm(rng)
        if apply_automorphism(p, member) != member:
            return SuiteResult(name, False, "environment member moved by an automorphism")
    for _ in range(cases):
        a = random_normal_term(rng, size=rng.randint(1, 5))
        b = random_normal_term(rng, size=rng.randint(1, 5))
        pair = red(app(PAIR, a, b), 10_000).value_or_none()
        if pair is None:
            return SuiteResult(name, False, "pairing did not reduce")
        if red(App(FST, pair), 10_000).value_or_none() != a:
            return SuiteResult(name, False, "first projection failed")
        if red(App(SND, pair), 10_000).value_or_none() != b:
            return SuiteResult(name, False, "second projection failed")
    for n in range(20):
        if numeral_value(numeral(n)) != n:
            return SuiteResult(name, False, "numeral round-trip failed")
        want = TRUE if n == 0 else FALSE
        if red(App(ISZERO, numeral(n)), 10_000).value_or_none() != want:
            return SuiteResult(name, False, "iszero law failed")
        if n > 0 and red(App(PRED, numeral(n)), 10_000).value_or_none() != numeral(n - 1):
            return SuiteResult(name, False, "pred law failed")
    eqn = eqnat_term()
    for n in range(8):
        for m in range(8):
            want = TRUE if n == m else FALSE
            if red(app(eqn, numeral(n), numeral(m)), 100_000).value_or_none() != want:
                return SuiteResult(name, False, f"eqnat({n},{m}) failed")
    return SuiteResult(name, True, f"{cases} pair cases, numerals to 20")


def suite_gadgets(profile: HaltingProfile | None = None) -> SuiteResult:
    name = "gadgets"
    profile = profile or HaltingProfile.halts_at(3)
    stage = profile.halt_stage
    probe = build_staged_probe(profile, 0, 5, Perm.identity())
    report = probe_type1(probe, 12, 100_000)
    if not report.consistent:
        return SuiteResult(name, False, f"staged probe not numeral-total: {report.witness}")
    for level in range(12):
        got = red(App(probe, numeral(level)), 100_000).value_or_none()
        halted = stage is not None and level >= stage
        want = numeral(5) if halted else numeral(0)
        if got != want:
            return SuiteResult(name, False, f"staged probe wrong at stage {level}")
    swapped = apply_automorphism(Perm.swap(5, 6), probe)
    rebuilt = build_staged_probe(profile, 0, 6, Perm.swap(5, 6))
    if swapped != rebuilt:
        return SuiteResult(name, False, "gadget equivariance failed")
    return SuiteResult(name, True, f"profile {profile.spec()}")


def suite_realizability(seed: int = 5, cases: int = 60) -> SuiteResult:
    rng = random.Random(seed)
    name = "realizability"
    refl = equality_realizers()["refl"]
    for _ in range(cases):
        a = random_rset(rng, max_rank=2)
        if not check(refl, eq(a, a), 100_000).realized:
            return SuiteResult(name, False, "reflexivity failed")
        params = [a, random_rset(rng, max_rank=2)]
        phi = random_decidable_formula(rng, params, depth=1)
        try:
            e = synthesize_realizer(phi)
        except SynthesisFailure:
            check(random_realizer(rng), phi, 50_000)  # must not raise
            continue
        if not check(e, phi, 100_000).realized:
            return SuiteResult(name, False, f"synthesized realizer rejected for {phi!r}")
    return SuiteResult(name, True, f"{cases} cases")


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "terms": suite_terms,
    "reduction": suite_reduction,
    "stdlib": suite_stdlib,
    "gadgets": suite_gadgets,
    "realizability": suite_realizability,
}


def run_suites(
    names: list[str] | None = None, profile: HaltingProfile | None = None
) -> list[SuiteResult]:
    results = []
    for name, fn in SUITES.items():
        if names and name not in names:
            continue
        if name == "gadgets":
            results.append(fn(profile=profile))
        else:
            results.append(fn())
    return results
