"""BLTL terms in canonical form, the apply operator and term evaluation.

A term ``>>^l_k g_{k-1}(... g_0(>>^l_0 b))`` is stored flat as a *base* plus
an ``ops`` tuple read innermost first, where ``None`` is one placeholder and
a :class:`BoolFn` is a fixed function. Fixed functions sitting directly on
the base are folded into it, so a non-empty ``ops`` always starts with a
placeholder. Powers of placeholders therefore compose for free.

During synthesis the base may become symbolic: an :class:`Apply` of a
fixed function or a :class:`BlockVar` to another ground term, or an
unknown :class:`Var`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .bits import BitVec, BnnModel, BoolFn
from .errors import NotApplicable, UnboundVariable, WidthError


@dataclass(frozen=True)
class Var:
    """A vector-valued variable: bound by a quantifier or left to the solver."""

    name: str
    width: int


@dataclass(frozen=True)
class BlockVar:
    """The unknown block f_index. Widths are None until fixed by an architecture."""

    index: int
    in_width: int | None = None
    out_width: int | None = None

    @property
    def label(self):
        return f"f{self.index}"


@dataclass(frozen=True)
class Apply:
    fn: Union[BoolFn, BlockVar]
    arg: "Ground"

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.fn, self.arg)))

    def __hash__(self):
        return self._h


Ground = Union[BitVec, Var, Apply]


def ground_width(g: Ground) -> int | None:
    if isinstance(g, Apply):
        return g.fn.out_width
    return g.width


def is_concrete(g: Ground) -> bool:
    return isinstance(g, BitVec)


def apply_ground(fn, g: Ground) -> Ground:
    """``fn(g)``, evaluated when both the function and the argument are concrete."""
    w = ground_width(g)
    if fn.in_width is not None and w is not None and fn.in_width != w:
        raise NotApplicable(f"{_fn_label(fn)} expects {fn.in_width} bits, argument has {w}")
    if isinstance(fn, BoolFn) and isinstance(g, BitVec):
        return fn(g)
    return Apply(fn, g)


def ground_vars(g: Ground) -> set[Var]:
    out = set()
    while isinstance(g, Apply):
        g = g.arg
    if isinstance(g, Var):
        out.add(g)
    return out


def block_indices(g: Ground) -> list[int]:
    out = []
    while isinstance(g, Apply):
        if isinstance(g.fn, BlockVar):
            out.append(g.fn.index)
        g = g.arg
    return out


def substitute_ground(g: Ground, env: dict) -> Ground:
    if isinstance(g, Var):
        return env.get(g, g)
    if isinstance(g, Apply):
        inner = substitute_ground(g.arg, env)
        if inner is g.arg:
            return g
        return apply_ground(g.fn, inner)
    return g


def shift_ground(g: Ground, delta: int) -> Ground:
    if isinstance(g, Apply):
        fn = g.fn
        if isinstance(fn, BlockVar):
            fn = BlockVar(fn.index + delta, fn.in_width, fn.out_width)
        return Apply(fn, shift_ground(g.arg, delta))
    return g


def _fn_label(fn):
    return fn.label


@dataclass(frozen=True)
class Term:
    base: Ground
    ops: tuple = ()

    def __post_init__(self):
        base, ops = self.base, tuple(self.ops)
        i = 0
        while i < len(ops) and ops[i] is not None:
            base = apply_ground(ops[i], base)
            i += 1
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "ops", ops[i:])
        object.__setattr__(self, "_h", hash((base, self.ops)))

    def __hash__(self):
        return self._h

    @property
    def length(self) -> int:
        """Number of pending placeholders, len(t)."""
        return sum(1 for op in self.ops if op is None)

    @property
    def width(self) -> int | None:
        """Width of the value, or None when a block may still change it."""
        w = ground_width(self.base)
        for op in self.ops:
            w = None if op is None else op.out_width
        return w

    def next_fixed(self):
        """The fixed function g_0 right after the innermost placeholder, if any."""
        if len(self.ops) > 1 and self.ops[1] is not None:
            return self.ops[1]
        return None

    def applicable(self, f) -> bool:
        if self.length == 0:
            return True
        w = ground_width(self.base)
        if f.in_width is not None and w is not None and f.in_width != w:
            return False
        g0 = self.next_fixed()
        if g0 is not None and f.out_width is not None and f.out_width != g0.in_width:
            return False
        return True

    def apply(self, f) -> "Term":
        """t[f]: instantiate the innermost placeholder with ``f``."""
        if self.length == 0:
            return self
        if not self.applicable(f):
            raise NotApplicable(f"{_fn_label(f)} is not applicable to {term_to_text(self)}")
        return Term(apply_ground(f, self.base), self.ops[1:])

    def collapse(self) -> Ground:
        """t-down: every remaining placeholder instantiated with the identity."""
        g = self.base
        for op in self.ops:
            if op is not None:
                g = apply_ground(op, g)
        return g


def const(b: BitVec | str) -> Term:
    if isinstance(b, str):
        b = BitVec.from_str(b)
    return Term(b)


def var(name: str, width: int) -> Term:
    return Term(Var(name, width))


def nxt(k: int, t: Term) -> Term:
    """``>>^k t``."""
    if k < 0:
        raise ValueError("placeholder power must be >= 0")
    return Term(t.base, t.ops + (None,) * k)


def app(g: BoolFn, t: Term) -> Term:
    w = t.width
    if w is not None and g.in_width != w:
        raise WidthError(f"{g.label} expects {g.in_width} bits, term has {w}")
    return Term(t.base, t.ops + (g,))


def substitute_term(t: Term, env: dict) -> Term:
    base = substitute_ground(t.base, env)
    if base is t.base:
        return t
    return Term(base, t.ops)


def term_vars(t: Term) -> set[Var]:
    return ground_vars(t.base)


def eval_term(t: Term, model: BnnModel, i: int) -> BitVec:
    """Value of ``t`` at position ``i``; blocks at positions >= n act as the identity."""
    value = t.base
    if not isinstance(value, BitVec):
        raise UnboundVariable(f"term {term_to_text(t)} is not ground")
    pos = i
    for op in t.ops:
        if op is None:
            value = model.block(pos, value.width)(value)
            pos += 1
        else:
            value = op(value)
    return value


def ground_to_text(g: Ground) -> str:
    if isinstance(g, BitVec):
        return f"0b{g}"
    if isinstance(g, Var):
        return g.name
    return f"{_fn_label(g.fn)}({ground_to_text(g.arg)})"


def term_to_text(t: Term) -> str:
    s = ground_to_text(t.base)
    run = 0
    for op in t.ops:
        if op is None:
            run += 1
            continue
        if run:
            s = f">>^{run} {s}"
            run = 0
        s = f"{op.label}({s})"
    if run:
        s = f">>^{run} {s}"
    return s
