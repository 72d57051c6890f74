"""Direct (inductive) satisfaction relation of BLTL over a concrete BNN.

A run over an n-block network visits positions 0..n. ``X psi`` holds at i
iff i < n and psi holds at i+1; ``WX psi`` holds at n unconditionally.
Until and Release range over positions up to and including n.
"""
from __future__ import annotations

from .bits import BitVec, BnnModel, all_vectors, dec
from .errors import WidthError
from .logic import (
    And,
    Atom,
    Exists,
    FalseF,
    Finally,
    Forall,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    Release,
    TrueF,
    Until,
    WeakNext,
)
from .terms import eval_term, substitute_term

ORDERS = ("integer", "elementwise")


def compare(a: BitVec, rel: str, b: BitVec, order: str = "integer") -> bool:
    """``a rel b`` on two vectors of equal width.

    ``=`` and ``!=`` are bitwise in both orders. Under the elementwise order
    the remaining relations must hold at every bit position.
    """
    if a.width != b.width:
        raise WidthError(f"cannot compare {a.width}-bit and {b.width}-bit vectors")
    if rel == "=":
        return a.bits == b.bits
    if rel == "!=":
        return a.bits != b.bits
    if order == "integer":
        x, y = dec(a), dec(b)
        return {"<=": x <= y, ">=": x >= y, "<": x < y, ">": x > y}[rel]
    if order != "elementwise":
        raise ValueError(f"unknown order {order!r}")
    pairs = zip(a.bits, b.bits)
    if rel == "<=":
        return all(p <= q for p, q in pairs)
    if rel == ">=":
        return all(p >= q for p, q in pairs)
    if rel == "<":
        return all(p < q for p, q in pairs)
    return all(p > q for p, q in pairs)


def eval_atom(atom: Atom, model: BnnModel, i: int, order: str = "integer") -> bool:
    lhs = eval_term(atom.lhs, model, i)
    rhs = eval_term(atom.rhs, model, i)
    return compare(lhs, atom.rel, rhs, order) != atom.negated


def eval_ground_atom(atom: Atom, order: str = "integer") -> bool:
    """Truth value of a placeholder-free atom over constants (gamma-down)."""
    lhs, rhs = atom.lhs.collapse(), atom.rhs.collapse()
    if not (isinstance(lhs, BitVec) and isinstance(rhs, BitVec)):
        raise ValueError("atom is not ground")
    return compare(lhs, atom.rel, rhs, order) != atom.negated


def satisfies(model: BnnModel, f, i: int = 0, order: str = "integer") -> bool:
    """N, i |= f.

    Works on the full surface syntax, including derived operators and
    quantifiers (unfolded over all of B^k), so it can serve as an
    independent reference for :func:`bnnsynth.logic.to_nnf`.
    """
    n = len(model)
    if not 0 <= i <= n:
        raise ValueError(f"position {i} outside 0..{n}")

    def sat(g, j, env):
        if isinstance(g, TrueF):
            return True
        if isinstance(g, FalseF):
            return False
        if isinstance(g, Atom):
            if env:
                g = Atom(substitute_term(g.lhs, env), g.rel, substitute_term(g.rhs, env), g.negated)
            return eval_atom(g, model, j, order)
        if isinstance(g, Not):
            return not sat(g.arg, j, env)
        if isinstance(g, And):
            return sat(g.left, j, env) and sat(g.right, j, env)
        if isinstance(g, Or):
            return sat(g.left, j, env) or sat(g.right, j, env)
        if isinstance(g, Implies):
            return (not sat(g.left, j, env)) or sat(g.right, j, env)
        if isinstance(g, Next):
            return j < n and sat(g.arg, j + 1, env)
        if isinstance(g, WeakNext):
            return j >= n or sat(g.arg, j + 1, env)
        if isinstance(g, Until):
            for k in range(j, n + 1):
                if sat(g.right, k, env):
                    return True
                if not sat(g.left, k, env):
                    return False
            return False
        if isinstance(g, Release):
            for k in range(j, n + 1):
                if not sat(g.right, k, env):
                    return False
                if sat(g.left, k, env):
                    return True
            return True
        if isinstance(g, Finally):
            return any(sat(g.arg, k, env) for k in range(j, n + 1))
        if isinstance(g, Globally):
            return all(sat(g.arg, k, env) for k in range(j, n + 1))
        if isinstance(g, (Forall, Exists)):
            quant = all if isinstance(g, Forall) else any
            return quant(
                sat(g.body, j, {**env, g.var: b}) for b in all_vectors(g.var.width)
            )
        raise TypeError(f"not a formula: {g!r}")

    return sat(f, i, {})
