"""On-the-fly tableau search for model checking and synthesis.

A node is ``(depth, gamma)``. Within a node the deterministic rules (And,
Until/Release expansion, True, False and evaluation of placeholder-free
atoms) run to a fixpoint, then the leftmost Or splits the node (left branch
first), and once only atoms and X/WX-formulas remain the Modal rule moves to
depth + 1: each atom gets the next block applied and each ``X psi`` /
``WX psi`` contributes ``psi``.

In check mode the block is the model's block at that depth. In synthesis
mode it is a fresh block variable ``f_depth``; atoms that become
placeholder-free but still mention block variables (or unknown vectors) are
collected on the path and handed to the difference-logic solver at every
Modal node.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .bits import BitVec, BnnModel
from .errors import BnnSynthError, NotApplicable, ResourceLimit, WidthError
from .logic import (
    And,
    Atom,
    FalseF,
    Formula,
    Next,
    Or,
    Release,
    TrueF,
    Until,
    WeakNext,
    atoms_of,
    count_temporal,
    free_vars,
    is_nnf,
    release_expansion,
    until_expansion,
)
from .semantics import eval_ground_atom
from .solver import SolveStats, encode, infer_shapes, solve
from .terms import BlockVar, Term, block_indices, shift_ground

log = logging.getLogger("bnnsynth.tableau")

__all__ = [
    "TableauNode",
    "SearchConfig",
    "SearchStats",
    "SuccessPath",
    "Failure",
    "Tableau",
    "NotModalNode",
    "threshold",
    "check",
    "modal_signature",
    "modal_isomorphic",
]


class NotModalNode(BnnSynthError, ValueError):
    pass


def threshold(phi: Formula) -> int:
    """Depth bound ``2^((k+1)c + p) + 1`` for synthesis search on ``phi``.

    c counts the distinct constraints of phi, k is their maximal length and
    p the number of temporal operators.
    """
    atoms = atoms_of(phi)
    c = len(atoms)
    k = max((a.length for a in atoms), default=0)
    p = count_temporal(phi)
    return 2 ** ((k + 1) * c + p) + 1


@dataclass(frozen=True)
class TableauNode:
    depth: int
    gamma: tuple

    @property
    def is_modal(self) -> bool:
        return all(isinstance(g, (Atom, Next, WeakNext)) for g in self.gamma)


def _shift_atom(a: Atom, delta: int) -> Atom:
    return Atom(Term(shift_ground(a.lhs.base, delta), a.lhs.ops), a.rel,
                Term(shift_ground(a.rhs.base, delta), a.rhs.ops), a.negated)


def modal_signature(node: TableauNode):
    """Canonical form of a Modal node up to a shift of block-variable indices.

    The padded atoms are renumbered so that their common ending block index
    becomes 0; guarded formulas carry no block variables and are kept as is.
    """
    if not node.is_modal:
        raise NotModalNode("only Modal nodes have a signature")
    atoms = [g for g in node.gamma if isinstance(g, Atom)]
    guarded = frozenset(g for g in node.gamma if not isinstance(g, Atom))
    ending = max(
        (i for a in atoms for t in (a.lhs, a.rhs) for i in block_indices(t.base)),
        default=0,
    )
    return frozenset(_shift_atom(a, -ending) for a in atoms), guarded


def modal_isomorphic(n1: TableauNode, n2: TableauNode) -> bool:
    return modal_signature(n1) == modal_signature(n2)


@dataclass
class SearchConfig:
    """Search options.

    ``length`` fixes the network length (synthesis) or is taken from the
    model (check). ``shapes`` optionally fixes every block's widths.
    ``min_length`` is the shortest network a free-mode leaf may describe.
    """

    length: int | None = None
    shapes: list | None = None
    bounds: dict | None = None
    depth_limit: int | None = None
    min_length: int = 1
    node_limit: int | None = 200_000
    num_solutions: int = 1
    prune_isomorphic: bool = True
    default_width: int | None = None
    trace: bool = False


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    solver_calls: int = 0
    pruned: int = 0
    max_depth: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SuccessPath:
    atoms: tuple
    depth: int
    shapes: list = field(default_factory=list)
    values: list | None = None
    registry: object = None


@dataclass
class Failure:
    reason: str = "search exhausted"


_FAIL = object()


class Tableau:
    """One search instance; not reentrant."""

    def __init__(self, phi: Formula, model: BnnModel | None = None, cfg: SearchConfig | None = None,
                 unknowns=()):
        if not is_nnf(phi):
            raise ValueError("the tableau needs an NNF formula")
        extra = free_vars(phi) - set(unknowns)
        if extra:
            raise ValueError("formula has unbound variables: " + ", ".join(sorted(v.name for v in extra)))
        self.phi = phi
        self.model = model
        self.cfg = cfg or SearchConfig()
        self.synth = model is None
        self.stats = SearchStats()
        self._cache = {}
        if self.synth:
            self.length = self.cfg.length
            self.limit = self.cfg.depth_limit if self.cfg.depth_limit is not None else threshold(phi)
        else:
            self.length = len(model)
            self.limit = self.length

    # rule application
    def _trace(self, depth, rule, size):
        if self.cfg.trace:
            log.debug("depth=%d rule=%s formulas=%d", depth, rule, size)

    def _saturate(self, depth, gamma, acc):
        """Run the deterministic rules; returns (gamma, acc) or _FAIL."""
        queue = deque(gamma)
        out, seen = [], set()
        acc = list(acc)
        acc_set = set(acc)
        while queue:
            g = queue.popleft()
            if g in seen:
                continue
            seen.add(g)
            if isinstance(g, TrueF):
                self._trace(depth, "True", len(queue) + len(out))
                continue
            if isinstance(g, FalseF):
                self._trace(depth, "False", len(queue) + len(out))
                return _FAIL
            if isinstance(g, And):
                self._trace(depth, "And", len(queue) + len(out))
                queue.appendleft(g.right)
                queue.appendleft(g.left)
                continue
            if isinstance(g, Until):
                self._trace(depth, "Until", len(queue) + len(out))
                queue.appendleft(until_expansion(g))
                continue
            if isinstance(g, Release):
                self._trace(depth, "Release", len(queue) + len(out))
                queue.appendleft(release_expansion(g))
                continue
            if isinstance(g, Atom) and g.length == 0:
                lhs, rhs = g.lhs.base, g.rhs.base
                if isinstance(lhs, BitVec) and isinstance(rhs, BitVec):
                    if lhs.width != rhs.width:
                        return _FAIL
                    ok = eval_ground_atom(g)
                    self._trace(depth, "True" if ok else "False", len(queue) + len(out))
                    if not ok:
                        return _FAIL
                    continue
                if not self.synth:
                    raise ValueError("check mode met a non-ground atom")
                if g not in acc_set:
                    acc_set.add(g)
                    acc.append(g)
                continue
            out.append(g)
        return tuple(out), tuple(acc)

    def _solve(self, acc, length=None):
        """(values, registry, shapes) for the collected atoms, or None if UNSAT."""
        key = (frozenset(acc), length)
        if key in self._cache:
            return self._cache[key]
        self.stats.solver_calls += 1
        try:
            shapes = infer_shapes(acc, length=length, shapes=self.cfg.shapes,
                                  default_width=self.cfg.default_width)
            p, reg = encode(acc, shapes, self.cfg.bounds)
            values = solve(p, SolveStats())
            result = None if values is None else (values, reg, shapes)
        except WidthError:
            result = None
        self._cache[key] = result
        return result

    def _block(self, depth):
        if not self.synth:
            return self.model.blocks[depth]
        shapes = self.cfg.shapes
        if shapes and depth < len(shapes):
            return BlockVar(depth, shapes[depth].in_width, shapes[depth].out_width)
        return BlockVar(depth)

    def _leaf_check(self, gamma):
        """Check-mode leaf at depth n: no X, every atom collapses to true."""
        for g in gamma:
            if isinstance(g, Next):
                return False
            if isinstance(g, Atom):
                if not eval_ground_atom(Atom(Term(g.lhs.collapse()), g.rel, Term(g.rhs.collapse()), g.negated)):
                    return False
        return True

    def search(self):
        """Run the search; returns a list of SuccessPath (possibly empty) in synthesis
        mode, or a single SuccessPath / Failure in check mode."""
        cfg = self.cfg
        stack = [(0, (self.phi,), (), ())]
        found, archs = [], set()
        while stack:
            depth, gamma, acc, sigs = stack.pop()
            self.stats.nodes += 1
            if cfg.node_limit is not None and self.stats.nodes > cfg.node_limit:
                raise ResourceLimit(f"node budget of {cfg.node_limit} exhausted")
            self.stats.max_depth = max(self.stats.max_depth, depth)
            res = self._saturate(depth, gamma, acc)
            if res is _FAIL:
                self.stats.backtracks += 1
                continue
            gamma, acc = res
            branch = next((i for i, g in enumerate(gamma) if isinstance(g, Or)), None)
            if branch is not None:
                g = gamma[branch]
                self._trace(depth, "Or", len(gamma))
                rest = gamma[:branch] + gamma[branch + 1:]
                stack.append((depth, rest[:branch] + (g.right,) + rest[branch:], acc, sigs))
                stack.append((depth, rest[:branch] + (g.left,) + rest[branch:], acc, sigs))
                continue
            # Modal node
            node = TableauNode(depth, gamma)
            if not self.synth:
                if depth == self.length or not gamma:
                    if self._leaf_check(gamma):
                        return SuccessPath((), depth)
                    self.stats.backtracks += 1
                    continue
            else:
                if acc and self._solve(acc) is None:
                    self.stats.backtracks += 1
                    continue
                leaf = self._synth_leaf(node, acc)
                if leaf is not None:
                    if leaf is not _FAIL:
                        key = (leaf.depth, tuple(leaf.shapes))
                        if key not in archs:
                            archs.add(key)
                            found.append(leaf)
                            if len(found) >= cfg.num_solutions:
                                return found
                    self.stats.backtracks += 1
                    continue
                if self.length is None:
                    if depth >= self.limit:
                        self.stats.backtracks += 1
                        continue
                    if cfg.prune_isomorphic:
                        sig = modal_signature(node)
                        if sig in sigs:
                            self.stats.pruned += 1
                            self.stats.backtracks += 1
                            continue
                        sigs = sigs + (sig,)
            f = self._block(depth)
            self._trace(depth, "Modal", len(gamma))
            try:
                nxt = []
                for g in gamma:
                    if isinstance(g, Atom):
                        nxt.append(g.apply(f))
                    else:
                        nxt.append(g.arg)
            except (NotApplicable, WidthError):
                self.stats.backtracks += 1
                continue
            stack.append((depth + 1, tuple(nxt), acc, sigs))
        if self.synth:
            return found
        return Failure()

    def _synth_leaf(self, node, acc):
        """A SuccessPath, _FAIL, or None when the node must be expanded further."""
        gamma, depth = node.gamma, node.depth
        if self.length is not None:
            if depth < self.length:
                return None
            if any(isinstance(g, Next) for g in gamma):
                return _FAIL
            extra = list(acc)
            for g in gamma:
                if isinstance(g, Atom):
                    c = Atom(Term(g.lhs.collapse()), g.rel, Term(g.rhs.collapse()), g.negated)
                    if isinstance(c.lhs.base, BitVec) and isinstance(c.rhs.base, BitVec):
                        if c.lhs.base.width != c.rhs.base.width or not eval_ground_atom(c):
                            return _FAIL
                    elif c not in extra:
                        extra.append(c)
            sol = self._solve(tuple(extra), self.length)
            if sol is None:
                return _FAIL
            return SuccessPath(tuple(extra), depth, sol[2], sol[0], sol[1])
        if depth < self.cfg.min_length:
            return None
        if any(isinstance(g, Next) or (isinstance(g, Atom) and g.length > 0) for g in gamma):
            return None
        sol = self._solve(acc, depth)
        if sol is None:
            return _FAIL
        return SuccessPath(tuple(acc), depth, sol[2], sol[0], sol[1])


def check(model: BnnModel, phi: Formula, cfg: SearchConfig | None = None) -> bool:
    """True iff the tableau of ``phi`` over ``model`` has a successful path."""
    cfg = cfg or SearchConfig(node_limit=None)
    return isinstance(Tableau(phi, model, cfg).search(), SuccessPath)
