"""BLTL formulas: AST, negation normal form, derived-operator expansion,
subformula sets and proper closures."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .bits import BitVec, all_vectors
from .errors import ExpansionError, UnboundVariable
from .terms import Term, Var, substitute_term, term_to_text, term_vars

RELATIONS = ("<=", ">=", "<", ">", "=", "!=")
# complement of each relation under the integer order
COMPLEMENT = {"<=": ">", ">": "<=", "<": ">=", ">=": "<", "=": "!=", "!=": "="}


class Formula:
    """Base class of all formula nodes. Nodes are immutable and hash-consed by value."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()


def _node(cls):
    cls = dataclass(frozen=True)(cls)
    names = tuple(f.name for f in dataclasses.fields(cls))
    tag = cls.__name__

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((tag,) + tuple(getattr(self, n) for n in names)))

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or self._h != other._h:
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    def __hash__(self):
        return self._h

    init = cls.__init__

    def __init__(self, *args, **kwargs):
        init(self, *args, **kwargs)
        __post_init__(self)

    cls.__init__ = __init__
    cls.__eq__ = __eq__
    cls.__hash__ = __hash__
    return cls


@_node
class TrueF(Formula):
    pass


@_node
class FalseF(Formula):
    pass


TRUE = TrueF()
FALSE = FalseF()


@_node
class Atom(Formula):
    lhs: Term
    rel: str
    rhs: Term
    negated: bool = False

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    @property
    def length(self) -> int:
        return max(self.lhs.length, self.rhs.length)

    def apply(self, f) -> "Atom":
        return Atom(self.lhs.apply(f), self.rel, self.rhs.apply(f), self.negated)

    def applicable(self, f) -> bool:
        return self.lhs.applicable(f) and self.rhs.applicable(f)

    @property
    def positive_rel(self) -> str:
        """The relation with the negation flag folded in (integer order)."""
        return COMPLEMENT[self.rel] if self.negated else self.rel


@_node
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Next(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class WeakNext(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class Until(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Release(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@_node
class Finally(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class Globally(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@_node
class Forall(Formula):
    var: Var
    body: Formula

    def children(self):
        return (self.body,)


@_node
class Exists(Formula):
    var: Var
    body: Formula

    def children(self):
        return (self.body,)


TEMPORAL = (Next, WeakNext, Until, Release, Finally, Globally)
NNF_KINDS = (TrueF, FalseF, Atom, And, Or, Next, WeakNext, Until, Release)


def conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is TRUE."""
    items = list(items)
    if not items:
        return TRUE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj(items: Iterable[Formula]) -> Formula:
    items = list(items)
    if not items:
        return FALSE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Or(f, out)
    return out


def until_expansion(f: Until) -> Formula:
    return Or(f.right, And(f.left, Next(f)))


def release_expansion(f: Release) -> Formula:
    return And(f.right, Or(f.left, WeakNext(f)))


@dataclass(frozen=True)
class Signature:
    """Named vector constants and fixed Boolean functions."""

    constants: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def vectors_of_width(self, k: int) -> list[BitVec]:
        vals = {b for b in self.constants.values() if b.width == k}
        return sorted(vals, key=lambda b: b.bits)


@dataclass(frozen=True)
class ExpansionConfig:
    """How quantifiers are unfolded.

    ``domain="full"`` ranges over all of B^k; ``domain="signature"`` only over
    the declared constants of width k.
    """

    max_quantifier_width: int = 8
    domain: str = "full"

    def __post_init__(self):
        if self.domain not in ("full", "signature"):
            raise ValueError("domain must be 'full' or 'signature'")


DEFAULT_EXPANSION = ExpansionConfig()


def _domain(v: Var, sig: Signature | None, cfg: ExpansionConfig) -> list[BitVec]:
    if v.width > cfg.max_quantifier_width:
        raise ExpansionError(
            f"quantifier over {v.name} has width {v.width} > {cfg.max_quantifier_width}"
        )
    if cfg.domain == "signature":
        if sig is None:
            raise ExpansionError("signature-domain expansion needs a signature")
        return sig.vectors_of_width(v.width)
    return list(all_vectors(v.width))


def _expand(f, neg, env, sig, cfg, free):
    rec = lambda g, n=neg: _expand(g, n, env, sig, cfg, free)  # noqa: E731
    if isinstance(f, TrueF):
        return FALSE if neg else TRUE
    if isinstance(f, FalseF):
        return TRUE if neg else FALSE
    if isinstance(f, Atom):
        lhs, rhs = f.lhs, f.rhs
        if env:
            lhs, rhs = substitute_term(lhs, env), substitute_term(rhs, env)
        for v in term_vars(lhs) | term_vars(rhs):
            if v not in free:
                raise UnboundVariable(f"variable {v.name} is not bound")
        return Atom(lhs, f.rel, rhs, f.negated != neg)
    if isinstance(f, Not):
        return rec(f.arg, not neg)
    if isinstance(f, And):
        return (Or if neg else And)(rec(f.left), rec(f.right))
    if isinstance(f, Or):
        return (And if neg else Or)(rec(f.left), rec(f.right))
    if isinstance(f, Implies):
        return (And if neg else Or)(rec(f.left, not neg), rec(f.right))
    if isinstance(f, Next):
        return (WeakNext if neg else Next)(rec(f.arg))
    if isinstance(f, WeakNext):
        return (Next if neg else WeakNext)(rec(f.arg))
    if isinstance(f, Until):
        return (Release if neg else Until)(rec(f.left), rec(f.right))
    if isinstance(f, Release):
        return (Until if neg else Release)(rec(f.left), rec(f.right))
    if isinstance(f, Finally):
        return rec(Until(TRUE, f.arg))
    if isinstance(f, Globally):
        return rec(Release(FALSE, f.arg))
    if isinstance(f, (Forall, Exists)):
        as_conj = isinstance(f, Forall) != neg
        parts = []
        for b in _domain(f.var, sig, cfg):
            inner_env = dict(env)
            inner_env[f.var] = b
            parts.append(_expand(f.body, neg, inner_env, sig, cfg, free))
        return conj(parts) if as_conj else disj(parts)
    raise TypeError(f"not a formula: {f!r}")


def to_nnf(f: Formula, free: Iterable[Var] = ()) -> Formula:
    """Negation normal form with derived operators and quantifiers unfolded.

    Quantifiers range over the full domain; see :func:`expand_derived` for the
    signature-restricted variant.
    """
    return _expand(f, False, {}, None, DEFAULT_EXPANSION, frozenset(free))


def expand_derived(
    f: Formula,
    sig: Signature | None = None,
    cfg: ExpansionConfig = DEFAULT_EXPANSION,
    free: Iterable[Var] = (),
    env: dict | None = None,
) -> Formula:
    """NNF with derived operators and quantifiers unfolded; ``env`` pre-binds variables."""
    return _expand(f, False, dict(env or {}), sig, cfg, frozenset(free))


def is_nnf(f: Formula) -> bool:
    if not isinstance(f, NNF_KINDS):
        return False
    return all(is_nnf(c) for c in f.children())


def atoms_of(f: Formula) -> list[Atom]:
    """Distinct atoms of ``f`` in first-occurrence order."""
    seen = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            seen.setdefault(g, None)
        stack.extend(reversed(g.children()))
    return list(seen)


def count_temporal(f: Formula) -> int:
    n = 1 if isinstance(f, TEMPORAL) else 0
    return n + sum(count_temporal(c) for c in f.children())


def free_vars(f: Formula) -> set[Var]:
    if isinstance(f, Atom):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    out = set()
    for c in f.children():
        out |= free_vars(c)
    return out


def subformulas(f: Formula) -> frozenset:
    """sub(f), closed under the Until/Release one-step expansions."""
    out = set()
    todo = [f]
    while todo:
        g = todo.pop()
        if g in out:
            continue
        out.add(g)
        todo.extend(g.children())
        if isinstance(g, Until):
            todo.append(until_expansion(g))
        elif isinstance(g, Release):
            todo.append(release_expansion(g))
    return frozenset(out)


def _violation(s: frozenset):
    """First formula of ``s`` whose closure obligation is unmet, with the fix-ups."""
    branch = None
    for g in s:
        if isinstance(g, And):
            missing = [c for c in (g.left, g.right) if c not in s]
            if missing:
                return missing, None
        elif isinstance(g, Until):
            e = until_expansion(g)
            if e not in s:
                return [e], None
        elif isinstance(g, Release):
            e = release_expansion(g)
            if e not in s:
                return [e], None
        elif isinstance(g, Or) and branch is None:
            if g.left not in s and g.right not in s:
                branch = g
    return None, branch


@lru_cache(maxsize=200_000)
def proper_closures(gamma: frozenset) -> frozenset:
    """The inclusion-minimal proper closures of ``gamma`` (a set of NNF formulas)."""
    found = set()
    seen = set()
    todo = [frozenset(gamma)]
    while todo:
        s = todo.pop()
        if s in seen:
            continue
        seen.add(s)
        add, branch = _violation(s)
        if add is not None:
            todo.append(s | frozenset(add))
        elif branch is not None:
            todo.append(s | {branch.right})
            todo.append(s | {branch.left})
        else:
            found.add(s)
    minimal = [c for c in found if not any(o < c for o in found)]
    return frozenset(minimal)


def is_proper_closure(closure: Iterable[Formula], gamma: Iterable[Formula] = ()) -> bool:
    s = set(closure)
    if not set(gamma) <= s:
        return False
    for g in s:
        if isinstance(g, And) and not (g.left in s and g.right in s):
            return False
        if isinstance(g, Or) and not (g.left in s or g.right in s):
            return False
        if isinstance(g, Until) and until_expansion(g) not in s:
            return False
        if isinstance(g, Release) and release_expansion(g) not in s:
            return False
    return True


_PREFIX = {Not: "!", Next: "X ", WeakNext: "WX ", Finally: "F ", Globally: "G "}
_INFIX = {And: "&", Or: "|", Implies: "->", Until: "U", Release: "R"}


def to_text(f: Formula) -> str:
    """Concrete syntax accepted by :func:`bnnsynth.frontend.parse_formula`."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        s = f"{term_to_text(f.lhs)} {f.rel} {term_to_text(f.rhs)}"
        return f"!({s})" if f.negated else s
    kind = type(f)
    if kind in _PREFIX:
        return f"{_PREFIX[kind]}({to_text(f.arg)})"
    if kind in _INFIX:
        return f"({to_text(f.left)} {_INFIX[kind]} {to_text(f.right)})"
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"({q} {f.var.name}:{f.var.width} . {to_text(f.body)})"
    raise TypeError(f"not a formula: {f!r}")

