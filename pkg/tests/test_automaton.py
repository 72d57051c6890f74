import pytest

from bnnsynth.automaton import AutomatonError, accepts, construct, is_accepting
from bnnsynth.bits import BitVec, BnnModel, BoolFn
from bnnsynth.logic import FALSE, And, Atom, Next, Or, Until, TRUE
from bnnsynth.semantics import satisfies
from bnnsynth.tableau import check
from bnnsynth.terms import Term, Var, const, nxt

A = BitVec.from_str("01")
B = BitVec.from_str("10")
# maps a and b to 11, which is above b
F = BoolFn(2, 2, (0, 3, 3, 0), name="f")
G = BoolFn(2, 2, (0, 1, 2, 3), name="g")


def a2_formula(c: BitVec):
    """X((>>a = >>b) & X(a = c)) | >>a <= b."""
    left = Next(And(Atom(nxt(1, const(A)), "=", nxt(1, const(B))), Next(Atom(const(A), "=", const(c)))))
    right = Atom(nxt(1, const(A)), "<=", const(B))
    return Or(left, right)


def test_two_letter_example_accepts():
    phi = a2_formula(A)
    aut = construct(phi, [F, G])
    word = [F, F]
    assert accepts(aut, word)
    assert satisfies(BnnModel(tuple(word)), phi)
    assert check(BnnModel(tuple(word)), phi)


def test_two_letter_example_rejects_when_left_branch_fails():
    phi = a2_formula(BitVec.from_str("00"))
    aut = construct(phi, [F, G])
    assert not accepts(aut, [F, F])
    assert not satisfies(BnnModel((F, F)), phi)


def test_le_branch_evaluates_false_after_reading_f():
    phi = a2_formula(A)
    aut = construct(phi, [F, G])
    right = Atom(nxt(1, const(A)), "<=", const(B))
    (start,) = [s for s in aut.initial if right in aut.states[s]]
    succ = aut.delta(start, F)
    assert succ
    ground = Atom(const(F(A)), "<=", const(B))
    for s in succ:
        assert ground in aut.states[s]
        assert s not in aut.accepting
        for t in aut.delta(s, F):
            assert FALSE in aut.states[t]
            assert aut.delta(t, G) == frozenset()
    # with the identity the comparison 01 <= 10 holds
    assert any(s in aut.accepting for s in aut.delta(start, G))


def test_trivial_examples():
    bb = Atom(const(B), "=", const(B))
    aut = construct(bb, [G])
    assert aut.accepts([])
    assert any(s in aut.accepting for s in aut.initial)
    never = Atom(const(B), "!=", const(B))
    aut = construct(never, [G, F])
    for word in ([], [G], [F, G], [G, G, G]):
        assert not aut.accepts(word)


def test_until_over_words_of_different_lengths():
    end = Next(TRUE)
    phi = Until(end, Atom(nxt(1, const(A)), "=", const(A)))  # holds once no block is left
    aut = construct(phi, [F])
    for n in range(4):
        assert aut.accepts([F] * n) == satisfies(BnnModel((F,) * n), phi)


def test_is_accepting():
    assert is_accepting(frozenset())
    assert not is_accepting(frozenset({Next(TRUE)}))
    assert not is_accepting(frozenset({FALSE}))
    assert not is_accepting(frozenset({Atom(const(A), "=", const(BitVec.from_str("1")))}))


def test_errors_and_dot():
    with pytest.raises(AutomatonError):
        construct(TRUE, [])
    with pytest.raises(AutomatonError):
        construct(Atom(const(A), "=", Term(Var("x", 2))), [F])
    dot = construct(a2_formula(A), [F, G]).to_dot()
    assert dot.startswith("digraph A {")
    assert "doublecircle" in dot
    assert 'label="f"' in dot
