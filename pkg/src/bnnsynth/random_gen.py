"""Seeded random generators for formulas, models and difference-logic problems.

Used by the property tests and the acceptance suite; every generator takes
an explicit :class:`random.Random` so runs are reproducible.
"""
from __future__ import annotations

import random

from .bits import BitVec, BnnModel, BoolFn, bin_
from .logic import FALSE, TRUE, And, Atom, Formula, Next, Or, RELATIONS, Release, Until, WeakNext
from .semantics import eval_term, satisfies
from .solver.idl import ConstraintProblem, DiffAtom
from .terms import Term, const, nxt


def random_table(rng: random.Random, in_width: int, out_width: int, name=None) -> BoolFn:
    table = tuple(rng.randrange(1 << out_width) for _ in range(1 << in_width))
    return BoolFn(in_width, out_width, table, name=name)


def random_model(rng: random.Random, widths) -> BnnModel:
    """A model whose architecture is ``widths`` (n+1 widths for n blocks)."""
    return BnnModel(tuple(
        random_table(rng, a, b, name=f"f{i}") for i, (a, b) in enumerate(zip(widths, widths[1:]))
    ))


def random_square_model(rng: random.Random, width: int, max_blocks: int = 3) -> BnnModel:
    n = rng.randint(0, max_blocks)
    return random_model(rng, [width] * (n + 1))


def random_vector(rng: random.Random, width: int) -> BitVec:
    return bin_(rng.randrange(1 << width), width)


def random_term(rng: random.Random, width: int, max_len: int, fixed=()) -> Term:
    """A term with at most ``max_len`` placeholders, optionally interleaved with
    width-preserving fixed functions."""
    t = const(random_vector(rng, width))
    for _ in range(rng.randint(0, max_len)):
        t = nxt(1, t)
        if fixed and rng.random() < 0.25:
            g = rng.choice(fixed)
            t = Term(t.base, t.ops + (g,))
    return t


def random_atom(rng, width, max_len=2, fixed=()) -> Atom:
    return Atom(
        random_term(rng, width, max_len, fixed),
        rng.choice(RELATIONS),
        random_term(rng, width, max_len, fixed),
        rng.random() < 0.2,
    )


def random_nnf(rng: random.Random, width: int, max_atoms: int = 2, max_len: int = 2,
               max_temporal: int = 2, fixed=()) -> Formula:
    """A random NNF formula with at most the given numbers of atoms and temporal operators."""

    def leaf(a):
        if a == 1:
            return random_atom(rng, width, max_len, fixed)
        return rng.choice((TRUE, FALSE))

    def gen(a, t):
        if t == 0 and a <= 1:
            return leaf(a)
        kinds = []
        if t > 0:
            kinds += ["X", "WX", "U", "R"]
        kinds += ["And", "Or"]
        k = rng.choice(kinds)
        if k == "X":
            return Next(gen(a, t - 1))
        if k == "WX":
            return WeakNext(gen(a, t - 1))
        if k in ("U", "R"):
            t -= 1
        a1 = 1 if (t == 0 and a >= 2) else rng.randint(0, a)
        t1 = rng.randint(0, t)
        node = {"And": And, "Or": Or, "U": Until, "R": Release}[k]
        return node(gen(a1, t1), gen(a - a1, t - t1))

    return gen(rng.randint(1, max_atoms), rng.randint(0, max_temporal))


def random_idl_problem(rng: random.Random, max_vars: int = 10, max_const: int = 8,
                       max_disjunctions: int = 4) -> ConstraintProblem:
    """Unit difference atoms plus a few disjunctive clauses (cubes of 1-2 atoms)."""
    p = ConstraintProblem()
    n = rng.randint(1, max_vars)
    for _ in range(n):
        p.new_var()

    def atom():
        x = rng.randint(0, n)
        y = rng.randint(0, n)
        while y == x:
            y = rng.randint(0, n)
        return DiffAtom(x, y, rng.randint(-max_const, max_const))

    for _ in range(rng.randint(0, 2 * n)):
        p.add(atom())
    for _ in range(rng.randint(0, max_disjunctions)):
        cubes = [tuple(atom() for _ in range(rng.randint(1, 2))) for _ in range(rng.randint(2, 3))]
        p.add_clause(cubes)
    return p


def hidden_model_spec(rng: random.Random, max_blocks: int = 3, max_width: int = 3,
                      n_atoms: int = 3):
    """A random model and a conjunction of true ground facts about it.

    Facts have the form ``X^i (>>^j a  rel  c)`` with ``i + j <= n``; the
    constant c is chosen so that the fact holds on the hidden model.
    """
    n = rng.randint(1, max_blocks)
    widths = [rng.randint(1, max_width) for _ in range(n + 1)]
    model = random_model(rng, widths)
    facts = []
    for _ in range(n_atoms):
        i = rng.randint(0, n - 1) if rng.random() < 0.3 else 0
        # a placeholder term evaluated from position i sees blocks i, i+1, ...
        start = rng.randint(0, n - i)
        base = random_vector(rng, widths[i])
        t = nxt(start, const(base))
        value = eval_term(t, model, i)
        w = value.width
        top = (1 << w) - 1
        v = value.value
        rel = rng.choice(RELATIONS)
        if rel == "=":
            c = v
        elif rel == "!=":
            c = rng.choice([d for d in range(top + 1) if d != v])
        elif rel == "<=":
            c = rng.randint(v, top)
        elif rel == ">=":
            c = rng.randint(0, v)
        elif rel == "<":
            if v == top:
                rel, c = "<=", v
            else:
                c = rng.randint(v + 1, top)
        else:
            if v == 0:
                rel, c = ">=", 0
            else:
                c = rng.randint(0, v - 1)
        f: Formula = Atom(t, rel, const(bin_(c, w)))
        for _ in range(i):
            f = Next(f)
        facts.append(f)
    phi = facts[0]
    for f in facts[1:]:
        phi = And(phi, f)
    assert satisfies(model, phi), "generated facts must hold on the hidden model"
    return model, phi


__all__ = [
    "random_table",
    "random_model",
    "random_square_model",
    "random_vector",
    "random_term",
    "random_atom",
    "random_nnf",
    "random_idl_problem",
    "hidden_model_spec",
]
