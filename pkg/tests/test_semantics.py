import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bnnsynth.bits import BitVec, BnnModel, BoolFn, bin_
from bnnsynth.errors import WidthError
from bnnsynth.logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Finally,
    Forall,
    Globally,
    Next,
    Not,
    Or,
    Release,
    Until,
    WeakNext,
)
from bnnsynth.random_gen import random_nnf, random_square_model
from bnnsynth.semantics import compare, satisfies
from bnnsynth.terms import Term, Var, const, nxt

NEG = BoolFn(1, 1, (1, 0), name="neg")
ZERO = BitVec.from_str("0")
ONE = BitVec.from_str("1")


def bv(s):
    return BitVec.from_str(s)


def test_compare_integer_and_elementwise():
    assert compare(bv("01"), "<", bv("10"))
    assert not compare(bv("01"), "<", bv("10"), order="elementwise")
    assert compare(bv("00"), "<=", bv("10"), order="elementwise")
    assert compare(bv("11"), "!=", bv("10"))
    with pytest.raises(WidthError):
        compare(bv("1"), "=", bv("10"))


@given(st.integers(1, 5).flatmap(lambda w: st.tuples(st.integers(0, (1 << w) - 1), st.integers(0, (1 << w) - 1), st.just(w))),
       st.sampled_from(["<=", ">=", "<", ">", "=", "!="]))
def test_integer_order_matches_dec(xyw, rel):
    x, y, w = xyw
    expected = {"<=": x <= y, ">=": x >= y, "<": x < y, ">": x > y, "=": x == y, "!=": x != y}[rel]
    assert compare(bin_(x, w), rel, bin_(y, w)) == expected


def test_next_is_strong_and_weak_next_is_weak():
    empty = BnnModel(())
    one = BnnModel((NEG,))
    assert not satisfies(empty, Next(TRUE))
    assert satisfies(empty, WeakNext(FALSE))
    assert satisfies(one, Next(TRUE))
    assert not satisfies(one, WeakNext(FALSE))
    assert satisfies(one, WeakNext(FALSE), 1)


def test_placeholder_reads_the_block_at_the_current_position():
    m = BnnModel((NEG, NEG))
    p = Atom(nxt(1, const(ZERO)), "=", const(ONE))
    assert satisfies(m, p)
    assert satisfies(m, Next(p))
    assert not satisfies(m, Next(Next(p)))  # identity past the end
    assert satisfies(m, Atom(nxt(2, const(ZERO)), "=", const(ZERO)))


def test_until_release_finally_globally():
    m = BnnModel((NEG, NEG, NEG))
    at_end = Not(Next(TRUE))
    assert satisfies(m, Finally(at_end))
    assert satisfies(m, Until(Next(TRUE), at_end))
    assert not satisfies(m, Globally(Next(TRUE)))
    assert satisfies(m, Release(at_end, Or(Next(TRUE), at_end)))
    assert satisfies(m, Globally(TRUE))


def test_quantifiers():
    m = BnnModel((NEG,))
    x = Var("x", 1)
    f = Forall(x, Atom(nxt(1, Term(x)), "!=", Term(x)))
    assert satisfies(m, f)
    g = Exists(x, Atom(nxt(1, Term(x)), "=", const(ZERO)))
    assert satisfies(m, g)
    assert not satisfies(BnnModel(()), f)


def test_position_out_of_range():
    with pytest.raises(ValueError):
        satisfies(BnnModel(()), TRUE, 1)


@given(st.integers(0, 100_000))
def test_dual_operators_negate_each_other(seed):
    rng = random.Random(seed)
    f, g = random_nnf(rng, 2), random_nnf(rng, 2)
    m = random_square_model(rng, 2)
    for i in range(len(m) + 1):
        assert satisfies(m, Not(Until(f, g)), i) == satisfies(m, Release(Not(f), Not(g)), i)
        assert satisfies(m, Not(Next(f)), i) == satisfies(m, WeakNext(Not(f)), i)
        assert satisfies(m, And(f, g), i) == (satisfies(m, f, i) and satisfies(m, g, i))
