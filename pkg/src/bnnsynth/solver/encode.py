"""Encoding saturated path atoms into difference logic, and reading block
mappings back out of a model.

Every non-constant ground term t gets an integer variable v_t holding
dec of its value. Constants are folded in as offsets from the zero
variable. The generated constraints are:

* each atom ``t1 ~ t2`` as a clause over ``v_t1 - v_t2``;
* ``0 <= v <= 2^m - 1`` for every block application and unknown vector;
* functional consistency for every pair of applications of one block;
* a table disjunction for every fixed function applied to a non-constant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..bits import BitVec, BoolFn, dec
from ..errors import EncodingError, InconsistentModel, WidthError
from ..terms import Apply, BlockVar, Var, ground_width
from .idl import ZERO, ConstraintProblem, DiffAtom

MAX_TABLE_WIDTH = 12


@dataclass
class TermRegistry:
    """Injective map from non-constant ground terms to variable ids."""

    ids: dict = field(default_factory=dict)
    widths: dict = field(default_factory=dict)
    applications: dict = field(default_factory=dict)  # block index -> [Apply]
    unknowns: list = field(default_factory=list)

    def __contains__(self, t):
        return t in self.ids

    def __len__(self):
        return len(self.ids)


@dataclass(frozen=True)
class BlockShape:
    in_width: int
    out_width: int


class _Widths:
    """Union-find over width slots; a slot is ('in', i), ('out', i) or an int."""

    def __init__(self):
        self.parent = {}
        self.value = {}

    def find(self, s):
        self.parent.setdefault(s, s)
        while self.parent[s] != s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def fix(self, s, w):
        r = self.find(s)
        if r in self.value and self.value[r] != w:
            raise WidthError(f"width conflict: {self.value[r]} vs {w}")
        self.value[r] = w

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        va, vb = self.value.get(ra), self.value.get(rb)
        if va is not None and vb is not None and va != vb:
            raise WidthError(f"width conflict: {va} vs {vb}")
        self.parent[ra] = rb
        if vb is None and va is not None:
            self.value[rb] = va

    def get(self, s):
        return self.value.get(self.find(s))


def _slot(g, widths: _Widths):
    """A width slot standing for the width of ground term ``g``."""
    if isinstance(g, Apply):
        fn = g.fn
        if isinstance(fn, BlockVar):
            widths.union(("in", fn.index), _slot(g.arg, widths))
            if fn.in_width is not None:
                widths.fix(("in", fn.index), fn.in_width)
            if fn.out_width is not None:
                widths.fix(("out", fn.index), fn.out_width)
            return ("out", fn.index)
        widths.fix(_slot(g.arg, widths), fn.in_width)
        slot = ("const", id(g))
        widths.fix(slot, fn.out_width)
        return slot
    slot = ("const", id(g))
    widths.fix(slot, g.width)
    return slot


def infer_shapes(atoms, length: int | None = None, shapes=None, default_width: int | None = None):
    """Block shapes forced by the atoms, chained so out_i = in_{i+1}.

    Raises WidthError when the atoms force two different widths on one slot.
    Unconstrained slots take ``default_width`` (the widest constant by default).
    """
    widths = _Widths()
    indices = set()
    seen_widths = []
    for a in atoms:
        widths.union(_slot(a.lhs.collapse(), widths), _slot(a.rhs.collapse(), widths))
        for side in (a.lhs, a.rhs):
            g = side.collapse()
            while isinstance(g, Apply):
                if isinstance(g.fn, BlockVar):
                    indices.add(g.fn.index)
                g = g.arg
            seen_widths.append(ground_width(g))
    n = length if length is not None else (max(indices) + 1 if indices else 0)
    for i in range(n - 1):
        widths.union(("out", i), ("in", i + 1))
    if shapes:
        for i, s in enumerate(shapes):
            widths.fix(("in", i), s.in_width)
            widths.fix(("out", i), s.out_width)
    if default_width is None:
        default_width = max((w for w in seen_widths if w is not None), default=1)
    out = []
    for i in range(n):
        iw = widths.get(("in", i))
        ow = widths.get(("out", i))
        # an unconstrained input slot inherits the previous block's output
        if iw is None:
            iw = out[-1].out_width if out else default_width
            widths.fix(("in", i), iw)
        ow = widths.get(("out", i))
        if ow is None:
            ow = default_width
            widths.fix(("out", i), ow)
        out.append(BlockShape(iw, ow))
    return out


def _term_width(g, shapes):
    if isinstance(g, Apply) and isinstance(g.fn, BlockVar):
        return shapes[g.fn.index].out_width
    return ground_width(g)


def encode(atoms, shapes, bounds: dict | None = None):
    """The constraint problem and term registry for a set of saturated atoms.

    ``shapes`` lists one :class:`BlockShape` per block variable index;
    ``bounds`` optionally maps a block index to an ``(lo, hi)`` range for its
    outputs, tightening the default ``0 .. 2^m - 1``.
    """
    p = ConstraintProblem()
    reg = TermRegistry()
    bounds = bounds or {}
    table_groups = []

    def register(g):
        """(var id, offset) such that dec(g) = v + offset."""
        if isinstance(g, BitVec):
            return ZERO, dec(g)
        if g in reg.ids:
            return reg.ids[g], 0
        if isinstance(g, Var):
            v = p.new_var(g.name)
            reg.ids[g] = v
            reg.widths[g] = g.width
            reg.unknowns.append(g)
            p.add_bounds(v, 0, (1 << g.width) - 1)
            return v, 0
        if not isinstance(g, Apply):
            raise EncodingError(f"cannot encode {g!r}")
        arg = register(g.arg)
        fn = g.fn
        if isinstance(fn, BlockVar):
            if fn.index >= len(shapes):
                raise EncodingError(f"no shape for block f{fn.index}")
            shape = shapes[fn.index]
            if _term_width(g.arg, shapes) != shape.in_width:
                raise WidthError(f"f{fn.index} applied to a term of the wrong width")
            v = p.new_var(f"f{fn.index}_{len(reg.ids)}")
            reg.ids[g] = v
            reg.widths[g] = shape.out_width
            reg.applications.setdefault(fn.index, []).append(g)
            lo, hi = bounds.get(fn.index, (0, (1 << shape.out_width) - 1))
            p.add_bounds(v, lo, hi)
            return v, 0
        if isinstance(fn, BoolFn):
            if fn.in_width > MAX_TABLE_WIDTH:
                raise EncodingError(
                    f"{fn.label} has {fn.in_width} input bits; table encoding is capped at {MAX_TABLE_WIDTH}")
            if _term_width(g.arg, shapes) != fn.in_width:
                raise WidthError(f"{fn.label} applied to a term of the wrong width")
            v = p.new_var(f"{fn.label}_{len(reg.ids)}")
            reg.ids[g] = v
            reg.widths[g] = fn.out_width
            table_groups.append((fn, arg, v))
            return v, 0
        raise EncodingError(f"unknown function {fn!r}")

    for a in atoms:
        if a.lhs.length or a.rhs.length:
            raise EncodingError("atoms must be placeholder-free")
        lg, rg = a.lhs.collapse(), a.rhs.collapse()
        if _term_width(lg, shapes) != _term_width(rg, shapes):
            raise WidthError("atom compares terms of different widths")
        x, ox = register(lg)
        y, oy = register(rg)
        p.add_clause(relation_cubes(x, y, oy - ox, a.positive_rel))

    # functional consistency: equal arguments give equal outputs
    for apps in reg.applications.values():
        for i in range(len(apps)):
            for j in range(i + 1, len(apps)):
                s, t = apps[i], apps[j]
                if isinstance(s.arg, BitVec) and isinstance(t.arg, BitVec):
                    continue  # distinct constants, the pair is unconstrained
                xs, os_ = register(s.arg)
                xt, ot = register(t.arg)
                fs, ft = reg.ids[s], reg.ids[t]
                d = ot - os_
                p.add_clause([
                    (DiffAtom(xs, xt, d - 1),),
                    (DiffAtom(xt, xs, -d - 1),),
                    (DiffAtom(fs, ft, 0), DiffAtom(ft, fs, 0)),
                ])

    for fn, (x, ox), v in table_groups:
        cubes = []
        for d in range(1 << fn.in_width):
            # v_arg + ox = d and v_out = table[d]
            cubes.append((
                DiffAtom(x, ZERO, d - ox), DiffAtom(ZERO, x, ox - d),
                DiffAtom(v, ZERO, fn.table[d]), DiffAtom(ZERO, v, -fn.table[d]),
            ))
        p.add_clause(cubes)
    return p, reg


def relation_cubes(x: int, y: int, c: int, rel: str):
    """Cubes for ``v_x - v_y  rel  c`` over the integers."""
    if rel == "<=":
        return [(DiffAtom(x, y, c),)]
    if rel == "<":
        return [(DiffAtom(x, y, c - 1),)]
    if rel == ">=":
        return [(DiffAtom(y, x, -c),)]
    if rel == ">":
        return [(DiffAtom(y, x, -c - 1),)]
    if rel == "=":
        return [(DiffAtom(x, y, c), DiffAtom(y, x, -c))]
    if rel == "!=":
        return [(DiffAtom(x, y, c - 1),), (DiffAtom(y, x, -c - 1),)]
    raise ValueError(f"unknown relation {rel!r}")


@dataclass
class PartialMappings:
    """Input -> output value pairs forced on each block."""

    shapes: list
    table: dict = field(default_factory=dict)  # block index -> {in: out}

    @property
    def length(self) -> int:
        return len(self.shapes)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "blocks": [
                {
                    "index": i,
                    "in_width": s.in_width,
                    "out_width": s.out_width,
                    "mappings": [[k, v] for k, v in sorted(self.table.get(i, {}).items())],
                }
                for i, s in enumerate(self.shapes)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "PartialMappings":
        shapes, table = [], {}
        for blk in data["blocks"]:
            shapes.append(BlockShape(blk["in_width"], blk["out_width"]))
            table[blk["index"]] = {int(k): int(v) for k, v in blk["mappings"]}
        return cls(shapes, table)


def value_of(g, values, reg: TermRegistry) -> int:
    if isinstance(g, BitVec):
        return dec(g)
    return values[reg.ids[g]]


def extract_mappings(values, reg: TermRegistry, shapes) -> PartialMappings:
    """Per-block ``dec(t) -> dec(f_i(t))`` for every registered application."""
    out = PartialMappings(list(shapes))
    for index, apps in sorted(reg.applications.items()):
        table = out.table.setdefault(index, {})
        for g in apps:
            k = value_of(g.arg, values, reg)
            v = value_of(g, values, reg)
            if table.setdefault(k, v) != v:
                raise InconsistentModel(f"f{index} maps {k} to both {table[k]} and {v}")
            shape = shapes[index]
            if not (0 <= k < 1 << shape.in_width and 0 <= v < 1 << shape.out_width):
                raise InconsistentModel(f"f{index}: mapping {k}->{v} out of range")
    return out


def witnesses(values, reg: TermRegistry) -> dict:
    """Values chosen for unknown vectors (existential witnesses)."""
    from ..bits import bin_

    return {v: bin_(values[reg.ids[v]], v.width) for v in reg.unknowns}
