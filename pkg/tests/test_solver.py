import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import box_feasible, box_sat, enumerate_feasible, model_ok

from bnnsynth.bits import BitVec, BoolFn, identity
from bnnsynth.errors import EncodingError, InconsistentModel, WidthError
from bnnsynth.logic import Atom
from bnnsynth.random_gen import random_idl_problem
from bnnsynth.solver import (
    BlockShape,
    ConstraintProblem,
    DiffAtom,
    PartialMappings,
    bellman_ford,
    encode,
    export_smtlib,
    extract_mappings,
    infer_shapes,
    solve,
    witnesses,
)
from bnnsynth.terms import Apply, BlockVar, Term, Var, app, const


def bv(s):
    return BitVec.from_str(s)


def test_negative_cycle_is_unsat():
    p = ConstraintProblem()
    x, y = p.new_var("x"), p.new_var("y")
    p.add(DiffAtom(x, y, -1), DiffAtom(y, x, 0))
    assert solve(p) is None
    assert bellman_ford(3, list(p.atoms())) is None


def test_equality_is_sat():
    p = ConstraintProblem()
    x, y = p.new_var("x"), p.new_var("y")
    p.add(DiffAtom(x, y, 0), DiffAtom(y, x, 0), DiffAtom(x, 0, 5), DiffAtom(0, x, -5))
    values = solve(p)
    assert values == [0, 5, 5]


def test_disjunction_needs_backtracking():
    p = ConstraintProblem()
    x = p.new_var("x")
    p.add_bounds(x, 0, 3)
    p.add_clause([(DiffAtom(x, 0, -1),), (DiffAtom(0, x, -3),)])  # x <= -1 or x >= 3
    assert solve(p) == [0, 3]
    p.add(DiffAtom(x, 0, 2))
    assert solve(p) is None


def test_empty_clause_is_unsat():
    p = ConstraintProblem()
    p.add_clause([])
    assert solve(p) is None


@given(st.integers(0, 1_000_000))
def test_solver_agrees_with_box_oracle(seed):
    p = random_idl_problem(random.Random(seed))
    values = solve(p)
    if values is not None:
        assert model_ok(p, values)
    if box_sat(p):
        assert values is not None


def test_box_oracle_matches_enumeration():
    rng = random.Random(5)
    for _ in range(150):
        p = random_idl_problem(rng, max_vars=2, max_const=8, max_disjunctions=0)
        atoms = [(a.x, a.y, a.c) for a in p.atoms()]
        assert (box_feasible(p.num_vars, atoms, 8) is None) == \
            (enumerate_feasible(p.num_vars, atoms, 8) is None)


@given(st.integers(0, 1_000_000))
def test_bellman_ford_detects_exactly_the_negative_cycles(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    atoms = []
    for _ in range(rng.randint(0, 8)):
        x, y = rng.randrange(n + 1), rng.randrange(n + 1)
        atoms.append(DiffAtom(x, y, rng.randint(-4, 4)))
    dist = bellman_ford(n + 1, atoms)
    # without box bounds, a conjunction is satisfiable iff it is within a wide box
    brute = box_feasible(n + 1, [(a.x, a.y, a.c) for a in atoms], 64)
    assert (dist is None) == (brute is None)
    if dist is not None:
        assert all(dist[a.x] - dist[a.y] <= a.c for a in atoms)


def test_encode_single_mapping():
    f0 = BlockVar(0)
    atom = Atom(Term(Apply(f0, bv("01"))), "=", const(bv("10")))
    shapes = infer_shapes([atom], length=1)
    assert shapes == [BlockShape(2, 2)]
    p, reg = encode([atom], shapes)
    values = solve(p)
    m = extract_mappings(values, reg, shapes)
    assert m.table == {0: {1: 2}}
    assert m.to_dict() == {
        "length": 1,
        "blocks": [{"index": 0, "in_width": 2, "out_width": 2, "mappings": [[1, 2]]}],
    }
    assert PartialMappings.from_dict(json.loads(m.to_json())) == m


def test_functional_consistency_forces_equal_outputs():
    x = Var("x", 1)
    f0 = BlockVar(0)
    atoms = [
        Atom(Term(x), "=", const(bv("1"))),
        Atom(Term(Apply(f0, x)), "=", const(bv("0"))),
        Atom(Term(Apply(f0, bv("1"))), "=", const(bv("1"))),
    ]
    shapes = [BlockShape(1, 1)]
    p, reg = encode(atoms, shapes)
    assert solve(p) is None
    atoms[0] = Atom(Term(x), "=", const(bv("0")))
    p, reg = encode(atoms, shapes)
    values = solve(p)
    assert witnesses(values, reg) == {x: bv("0")}
    assert extract_mappings(values, reg, shapes).table == {0: {0: 0, 1: 1}}


def test_fixed_function_table_disjunction():
    x = Var("x", 1)
    atom = Atom(app(identity(1), Term(x)), "=", const(bv("1")))
    p, reg = encode([atom], [])
    table_clause = p.clauses[-1]
    assert len(table_clause) == 2
    assert all(len(cube) == 4 for cube in table_clause)
    assert witnesses(solve(p), reg) == {x: bv("1")}
    big = BoolFn(13, 1, (0,) * (1 << 13))
    with pytest.raises(EncodingError):
        encode([Atom(Term(Apply(big, Var("y", 13))), "=", const(bv("0")))], [])


def test_width_inference():
    f0, f1 = BlockVar(0), BlockVar(1)
    a = Atom(Term(Apply(f1, Apply(f0, bv("011")))), "=", const(bv("1")))
    assert infer_shapes([a], length=2) == [BlockShape(3, 3), BlockShape(3, 1)]
    with pytest.raises(WidthError):
        infer_shapes([a, Atom(Term(Apply(f0, bv("01"))), "=", const(bv("01")))], length=2)


def test_extract_rejects_inconsistent_values():
    f0 = BlockVar(0)
    atom = Atom(Term(Apply(f0, bv("1"))), "=", const(bv("1")))
    shapes = [BlockShape(1, 1)]
    p, reg = encode([atom], shapes)
    with pytest.raises(InconsistentModel):
        extract_mappings([0, 2], reg, shapes)


def test_smtlib_export_text():
    p = ConstraintProblem()
    x, y = p.new_var("x"), p.new_var("f0 out")
    p.add(DiffAtom(x, 0, 3))
    p.add_clause([(DiffAtom(x, y, -2),), (DiffAtom(0, y, 1), DiffAtom(y, x, 0))])
    p.add_clause([(DiffAtom(x, y, 0), DiffAtom(y, x, 0))])
    assert export_smtlib(p) == "\n".join([
        "(set-logic QF_IDL)",
        "(declare-fun x () Int)",
        "(declare-fun |f0 out| () Int)",
        "(assert (<= x 3))",
        "(assert (or (<= (- x |f0 out|) (- 2)) (and (>= |f0 out| (- 1)) (<= (- |f0 out| x) 0))))",
        "(assert (<= (- x |f0 out|) 0))",
        "(assert (<= (- |f0 out| x) 0))",
        "(check-sat)",
        "(get-model)",
    ]) + "\n"
    assert export_smtlib(ConstraintProblem()) == "(set-logic QF_IDL)\n(check-sat)\n"


def test_smtlib_round_trip_through_z3():
    z3 = pytest.importorskip("z3")
    rng = random.Random(17)
    for _ in range(60):
        p = random_idl_problem(rng)
        s = z3.Solver()
        s.from_string(export_smtlib(p))
        assert (s.check() == z3.sat) == (solve(p) is not None)
