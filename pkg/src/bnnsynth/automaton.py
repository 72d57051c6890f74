"""Explicit automaton A_phi over a finite pool of Boolean functions.

States are inclusion-minimal proper closures of formula sets; only states
reachable from the initial ones are built. Reading a letter f from state q
moves to the closures of ``{psi | X psi in q} | {psi | WX psi in q} | cons(q)[f]``,
where a placeholder-free constraint turns into true/false. A state holding
false has no successors. A state accepts when it holds no X-formula, no
false, and every constraint collapses to true.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bits import BoolFn
from .errors import BnnSynthError
from .logic import FALSE, TRUE, Atom, FalseF, Formula, Next, WeakNext, is_nnf, proper_closures, to_text
from .semantics import eval_ground_atom


class AutomatonError(BnnSynthError, ValueError):
    pass


def _is_closed_nnf(phi: Formula) -> bool:
    from .logic import free_vars

    return is_nnf(phi) and not free_vars(phi)


def successor_seed(q: frozenset, f: BoolFn):
    """The formula set whose closures are delta(q, f), or None if f does not apply."""
    if FALSE in q:
        return frozenset()
    out = set()
    for g in q:
        if isinstance(g, (Next, WeakNext)):
            out.add(g.arg)
        elif isinstance(g, Atom):
            if g.length == 0:
                # a width clash means the word is ill-typed for this constraint
                ok = g.lhs.width == g.rhs.width and eval_ground_atom(g)
                out.add(TRUE if ok else FALSE)
                continue
            if not g.applicable(f):
                return None
            out.add(g.apply(f))
    return frozenset(out)


def is_accepting(q: frozenset) -> bool:
    for g in q:
        if isinstance(g, (Next, FalseF)):
            return False
        if isinstance(g, Atom):
            if g.lhs.collapse().width != g.rhs.collapse().width or not eval_ground_atom(g):
                return False
    return True


@dataclass
class Automaton:
    formula: Formula
    alphabet: tuple
    states: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    initial: frozenset = frozenset()
    accepting: frozenset = frozenset()
    transitions: dict = field(default_factory=dict)  # (state id, letter id) -> frozenset of ids

    def _state(self, q: frozenset) -> int:
        if q not in self.index:
            self.index[q] = len(self.states)
            self.states.append(q)
            if is_accepting(q):
                self.accepting = self.accepting | {self.index[q]}
        return self.index[q]

    def _letter(self, f: BoolFn) -> int:
        try:
            return self.alphabet.index(f)
        except ValueError:
            self.alphabet = self.alphabet + (f,)
            return len(self.alphabet) - 1

    def delta(self, s: int, f: BoolFn) -> frozenset:
        key = (s, self._letter(f))
        if key not in self.transitions:
            seed = successor_seed(self.states[s], f)
            if seed is None or FALSE in self.states[s]:
                self.transitions[key] = frozenset()
            else:
                self.transitions[key] = frozenset(self._state(c) for c in proper_closures(seed))
        return self.transitions[key]

    def accepts(self, word) -> bool:
        current = set(self.initial)
        for f in word:
            nxt = set()
            for s in current:
                nxt |= self.delta(s, f)
            current = nxt
            if not current:
                return False
        return any(s in self.accepting for s in current)

    def to_dot(self) -> str:
        lines = ["digraph A {", "  rankdir=LR;"]
        for i, q in enumerate(self.states):
            label = "\\n".join(sorted(to_text(g).replace('"', '\\"') for g in q)) or "{}"
            shape = "doublecircle" if i in self.accepting else "circle"
            lines.append(f'  q{i} [shape={shape}, label="{label}"];')
        for i in sorted(self.initial):
            lines.append(f"  init{i} [shape=point]; init{i} -> q{i};")
        for (s, a), targets in sorted(self.transitions.items()):
            name = self.alphabet[a].label
            for t in sorted(targets):
                lines.append(f'  q{s} -> q{t} [label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def construct(phi: Formula, pool, explore: bool = True) -> Automaton:
    """A_phi restricted to the states reachable over ``pool``.

    With ``explore=False`` only the initial states are built and transitions
    are computed on demand by :meth:`Automaton.accepts`.
    """
    pool = tuple(dict.fromkeys(pool))
    if not pool:
        raise AutomatonError("the function pool is empty")
    if not _is_closed_nnf(phi):
        raise AutomatonError("the automaton needs a closed NNF formula")
    aut = Automaton(phi, pool)
    aut.initial = frozenset(aut._state(q) for q in proper_closures(frozenset({phi})))
    if explore:
        todo = sorted(aut.initial)
        seen = set(todo)
        while todo:
            s = todo.pop()
            for f in pool:
                for t in aut.delta(s, f):
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
    return aut


def accepts(aut: Automaton, word) -> bool:
    return aut.accepts(word)
