"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import random
import time

import pytest

from corpus import WIDTHS, all_formulas, corpus
from oracles import box_sat, model_ok

from bnnsynth.automaton import construct
from bnnsynth.bits import BitVec, BoolFn, bin_, dec, identity
from bnnsynth.frontend import gen_fairness, proper_pairs
from bnnsynth.logic import (
    FALSE,
    And,
    Atom,
    Finally,
    Globally,
    Next,
    Not,
    Or,
    Release,
    Until,
    WeakNext,
    atoms_of,
    count_temporal,
)
from bnnsynth.random_gen import hidden_model_spec, random_idl_problem, random_vector
from bnnsynth.semantics import satisfies
from bnnsynth.solver import solve
from bnnsynth.synthesis import (
    Fairness,
    SynthConfig,
    SynthResult,
    complete_blocks,
    evaluate_metric,
    policy_from_name,
    prepare,
    synthesize,
    synthesize_many,
    verify_model,
)
from bnnsynth.tableau import SearchConfig, Tableau, check
from bnnsynth.terms import const, eval_term, nxt


@pytest.fixture
def report(capsys):
    def emit(number, name, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return emit


def test_criterion_1_oracle_triangle(report):
    start = time.perf_counter()
    comparisons = disagreements = 0
    n_formulas = n_models = 0
    for w in WIDTHS:
        formulas, models = corpus(w)
        n_formulas += len(formulas)
        n_models += len(models)
        pool = list(dict.fromkeys(f for m in models for f in m.blocks)) or [identity(w)]
        for phi in formulas:
            aut = construct(phi, pool, explore=False)
            for m in models:
                a = satisfies(m, phi)
                b = aut.accepts(list(m.blocks))
                c = check(m, phi)
                comparisons += 1
                disagreements += not (a == b == c)
    elapsed = time.perf_counter() - start
    ok = n_formulas >= 500 and n_models >= 20 and disagreements == 0 and elapsed < 300
    assert report(1, "satisfies = automaton = tableau", ok,
                  f"{n_formulas} formulas, {n_models} models, {comparisons} comparisons, "
                  f"{disagreements} disagreements, {elapsed:.1f}s")


def test_criterion_2_automaton_example(report):
    start = time.perf_counter()
    a, b = BitVec.from_str("01"), BitVec.from_str("10")
    f1 = BoolFn(2, 2, (0, 3, 3, 0), name="f1")  # f1(a) = f1(b) = 11 > b
    f2 = BoolFn(2, 2, (0, 3, 3, 0), name="f2")

    def phi(c):
        left = Next(And(Atom(nxt(1, const(a)), "=", nxt(1, const(b))),
                        Next(Atom(const(a), "=", const(c)))))
        return Or(left, Atom(nxt(1, const(a)), "<=", const(b)))

    aut = construct(phi(a), [f1, f2])
    accepted = aut.accepts([f1, f2])
    right = Atom(nxt(1, const(a)), "<=", const(b))
    branch = [s for s in aut.initial if right in aut.states[s]]
    after = [t for s in branch for t in aut.delta(s, f1)]
    le_false = bool(after) and all(t not in aut.accepting for t in after) and \
        all(FALSE in aut.states[u] for t in after for u in aut.delta(t, f2))
    rejected = not construct(phi(BitVec.from_str("00")), [f1, f2]).accepts([f1, f2])
    elapsed = time.perf_counter() - start
    ok = accepted and le_false and rejected and elapsed < 1
    assert report(2, "two-letter automaton example", ok,
                  f"accepting run {accepted}, <= branch false {le_false}, "
                  f"a != c rejected {rejected}, {elapsed * 1000:.0f}ms")


def test_criterion_3_solver_vs_box_oracle(report):
    start = time.perf_counter()
    rng = random.Random(1234)
    mismatches = sat = 0
    for _ in range(1000):
        p = random_idl_problem(rng, max_vars=10, max_const=8, max_disjunctions=4)
        values = solve(p)
        if values is not None:
            sat += 1
            mismatches += not model_ok(p, values)
        if box_sat(p) and values is None:
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    assert report(3, "difference-logic solver vs brute-force box", ok,
                  f"1000 problems, {sat} sat, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_4_synthesis_soundness(report):
    rng = random.Random(4)
    passed = 0
    for k in range(100):
        model, phi = hidden_model_spec(rng)
        cfg = SynthConfig() if k % 2 else SynthConfig(
            shapes=[(f.in_width, f.out_width) for f in model.blocks])
        r = synthesize(phi, cfg)
        if not isinstance(r, SynthResult):
            continue
        if all(verify_model(complete_blocks(r, policy_from_name(name, seed=k)), phi)
               for name in ("zero", "nearest", "random")):
            passed += 1
    ok = passed == 100
    assert report(4, "synthesized models pass check under all policies", ok,
                  f"{passed}/100 specs")


def _unsat_specs(rng, count):
    specs = []
    for k in range(count):
        kind = k % 4
        w = rng.randint(1, 2)
        a, c = random_vector(rng, w), random_vector(rng, w)
        hit = Atom(nxt(1, const(a)), "=", const(c))
        if kind == 0:
            _, facts = hidden_model_spec(rng)
            first = facts
            while isinstance(first, And):
                first = first.left
            specs.append(And(facts, Not(first)))
        elif kind == 1:
            specs.append(And(Finally(hit), Globally(Not(hit))))
        elif kind == 2:
            d = bin_((dec(c) + 1) % (1 << w), w)
            depth = rng.randint(0, 3)
            f, g = hit, Atom(nxt(1, const(a)), "=", const(d))
            for _ in range(depth):
                f, g = Next(f), Next(g)
            specs.append(And(f, g))
        else:
            specs.append(Until(hit, And(Not(hit), Atom(const(a), "!=", const(a)))))
    return specs


def test_criterion_5_threshold_discipline(report):
    rng = random.Random(55)
    violations = failures = 0
    worst = (0, 0)
    specs = _unsat_specs(rng, 40)
    for spec in specs:
        nnf, unknowns = prepare(spec)
        atoms = atoms_of(nnf)
        c, k, p = len(atoms), max(a.length for a in atoms), count_temporal(nnf)
        bound = 2 ** ((k + 1) * c + p) + 1
        engine = Tableau(nnf, cfg=SearchConfig(node_limit=None), unknowns=unknowns)
        failures += engine.search() == []
        violations += engine.stats.max_depth > bound or engine.limit != bound
        worst = max(worst, (engine.stats.max_depth, bound))
    ok = failures == len(specs) and violations == 0
    assert report(5, "free-mode failure within the depth threshold", ok,
                  f"{failures}/{len(specs)} failures, {violations} bound violations, "
                  f"deepest {worst[0]} (threshold {worst[1]})")


def test_criterion_6_fairness(report):
    start = time.perf_counter()
    pairs = proper_pairs(6, (0, 1))
    phi = gen_fairness(pairs, length=2)
    r = synthesize(phi, SynthConfig(length=2))
    score = None
    if isinstance(r, SynthResult):
        score = evaluate_metric(complete_blocks(r), Fairness(tuple(pairs)))
    elapsed = time.perf_counter() - start
    ok = len(pairs) == 32 and score == 1 and elapsed < 120
    assert report(6, "6-bit fairness over all proper pairs", ok,
                  f"{len(pairs)} pairs, fairness {score}, {elapsed:.2f}s")


def test_criterion_7_flexible_architecture(report):
    pairs = proper_pairs(6, (0, 1))
    phi = gen_fairness(pairs, flexible=(2, 3), out_width=1)
    first = synthesize(phi, SynthConfig())
    results, _ = synthesize_many(phi, SynthConfig(num_solutions=2))
    lengths = sorted(r.length for r in results)
    archs = {(r.length, tuple(r.shapes)) for r in results}
    ok = isinstance(first, SynthResult) and first.length in (2, 3) and \
        lengths == [2, 3] and len(archs) == 2
    assert report(7, "flexible template lengths", ok,
                  f"first length {getattr(first, 'length', None)}, two solutions {lengths}")


def _blocks_by_hand(m, b, i, k):
    v = b
    for j in range(i, i + k):
        v = m.block(j, v.width)(v)
    return v


def test_criterion_8_round_trips_and_identities(report):
    dec_bin = all(dec(bin_(d, w)) == d and bin_(dec(bin_(d, w)), w) == bin_(d, w)
                  for w in range(1, 9) for d in range(1 << w))
    power_bad = identity_bad = 0
    formulas = all_formulas()
    for w in WIDTHS:
        fs, models = corpus(w)
        for phi in fs:
            for atom in atoms_of(phi):
                for t in (atom.lhs, atom.rhs):
                    k, b = t.length, t.base
                    for m in models:
                        for i in range(len(m) + 1):
                            want = _blocks_by_hand(m, b, i, k)
                            for k1 in range(k + 1):
                                power_bad += eval_term(nxt(k1, nxt(k - k1, const(b))), m, i) != want
        for psi, psi2 in zip(fs, fs[1:] + fs[:1]):
            sides = [
                (Globally(psi), Release(FALSE, psi)),
                (Finally(psi), Or(psi, Next(Finally(psi)))),
                (Globally(psi), And(psi, WeakNext(Globally(psi)))),
                (Until(psi, psi2), Or(psi2, And(psi, Next(Until(psi, psi2))))),
                (Release(psi, psi2), And(psi2, Or(psi, WeakNext(Release(psi, psi2))))),
            ]
            for m in models:
                for i in range(len(m) + 1):
                    identity_bad += sum(satisfies(m, lhs, i) != satisfies(m, rhs, i) for lhs, rhs in sides)
    ok = dec_bin and power_bad == 0 and identity_bad == 0
    assert report(8, "round trips and operator identities", ok,
                  f"dec/bin widths 1-8 {'ok' if dec_bin else 'broken'}, "
                  f"{power_bad} placeholder-power and {identity_bad} identity mismatches "
                  f"over {len(formulas)} formulas")
