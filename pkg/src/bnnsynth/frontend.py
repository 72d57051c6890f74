"""Textual BLTL specs and generators for robustness / fairness properties.

Grammar (``#`` starts a comment)::

    spec     := item* "formula" ":" formula ";"? EOF
    item     := "const" NAME ":" INT "=" BITS ";"
              | "fn" NAME ":" INT "->" INT "=" "[" INT ("," INT)* "]" ";"
              | "fn" NAME "=" ("identity" | "extract") "(" INT ("," INT)* ")" ";"
              | "option" NAME "=" NAME ";"
    formula  := quant | implies
    quant    := ("forall" | "exists") NAME ":" INT "." formula
    implies  := or ("->" implies)?
    or       := and ("|" or)?
    and      := until ("&" and)?
    until    := unary (("U" | "R") until)?
    unary    := ("!" | "X" | "WX" | "F" | "G") unary | quant | primary
    primary  := "true" | "false" | "(" formula ")" | term REL term
    term     := ">>" ("^" INT)? term | NAME "(" term ")" | NAME | "0b" BITS
    REL      := "=" | "!=" | "<=" | ">=" | "<" | ">"

``!`` applied directly to a comparison is folded into the atom's negation flag.
Options: ``order = integer | elementwise`` and ``quantifiers = full | signature``.
"""
from __future__ import annotations

import csv
import itertools
import random
import re
from dataclasses import dataclass, field

from .bits import BitVec, BoolFn, extractor, identity
from .errors import SpecSyntaxError, WidthError
from .logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Finally,
    Forall,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    Release,
    Signature,
    Until,
    WeakNext,
    conj,
    to_text,
)
from .terms import Apply, Term, Var, app, const, nxt

__all__ = [
    "SpecFile",
    "ProperPair",
    "parse_spec",
    "parse_formula",
    "spec_text",
    "hamming_ball",
    "gen_robustness",
    "gen_fairness",
    "proper_pairs",
    "pairs_from_rows",
    "read_csv_rows",
]


class UndeclaredIdentifier(SpecSyntaxError):
    pass


class SpecWidthError(SpecSyntaxError, WidthError):
    pass


KEYWORDS = {
    "true", "false", "X", "WX", "U", "R", "F", "G", "forall", "exists",
    "const", "fn", "option", "formula",
}
RELS = ("=", "!=", "<=", ">=", "<", ">")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<bits>0b[01]+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>>>|->|<=|>=|!=|[<>=&|!()\[\],;:.^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "name" and tok in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, tok, line, pos - line_start + 1))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class SpecFile:
    signature: Signature
    formula: Formula
    options: dict = field(default_factory=dict)

    @property
    def order(self) -> str:
        return self.options.get("order", "integer")

    @property
    def quantifiers(self) -> str:
        return self.options.get("quantifiers", "full")


class _Parser:
    def __init__(self, text, sig=None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig if sig is not None else Signature({}, {})
        self.scopes: list[dict] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None, cls=SpecSyntaxError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("kw", "sym")

    def take(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, text):
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.take()

    def expect_kind(self, kind, what):
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.take()

    def expect_int(self):
        return int(self.expect_kind("int", "an integer").text)

    # spec level
    def spec(self) -> SpecFile:
        options = {}
        consts, fns = dict(self.sig.constants), dict(self.sig.functions)
        self.sig = Signature(consts, fns)
        while not self.at("formula"):
            if self.at("const"):
                self.take()
                name = self.expect_kind("name", "a constant name")
                self.expect(":")
                width = self.expect_int()
                self.expect("=")
                val = self.tok
                if val.kind == "bits":
                    digits = val.text[2:]
                elif val.kind == "int" and set(val.text) <= {"0", "1"}:
                    digits = val.text
                else:
                    raise self.error("expected a 0-1 string")
                self.take()
                if len(digits) != width:
                    raise self.error(
                        f"constant {name.text} declared with width {width} but has "
                        f"{len(digits)} bits", val, SpecWidthError)
                consts[name.text] = BitVec.from_str(digits)
                self.expect(";")
            elif self.at("fn"):
                self.take()
                name = self.expect_kind("name", "a function name")
                if self.at(":"):
                    self.take()
                    n = self.expect_int()
                    self.expect("->")
                    m = self.expect_int()
                    self.expect("=")
                    start = self.expect("[")
                    table = [self.expect_int()]
                    while self.at(","):
                        self.take()
                        table.append(self.expect_int())
                    self.expect("]")
                    try:
                        fns[name.text] = BoolFn(n, m, tuple(table), name=name.text)
                    except WidthError as exc:
                        raise self.error(str(exc), start, SpecWidthError) from None
                else:
                    self.expect("=")
                    builtin = self.expect_kind("name", "identity or extract")
                    self.expect("(")
                    args = [self.expect_int()]
                    while self.at(","):
                        self.take()
                        args.append(self.expect_int())
                    self.expect(")")
                    try:
                        if builtin.text == "identity" and len(args) == 1:
                            fn = identity(args[0])
                            fn = BoolFn(fn.in_width, fn.out_width, fn.table, name=name.text)
                        elif builtin.text == "extract" and len(args) == 3:
                            fn = extractor(*args, name=name.text)
                        else:
                            raise self.error(f"unknown builtin {builtin.text}/{len(args)}", builtin)
                    except WidthError as exc:
                        raise self.error(str(exc), builtin, SpecWidthError) from None
                    fns[name.text] = fn
                self.expect(";")
            elif self.at("option"):
                self.take()
                key = self.expect_kind("name", "an option name")
                self.expect("=")
                value = self.expect_kind("name", "an option value")
                allowed = {"order": ("integer", "elementwise"), "quantifiers": ("full", "signature")}
                if key.text not in allowed:
                    raise self.error(f"unknown option {key.text}", key)
                if value.text not in allowed[key.text]:
                    raise self.error(f"bad value for {key.text}: {value.text}", value)
                options[key.text] = value.text
                self.expect(";")
            else:
                found = self.tok.text or "end of input"
                raise self.error(f"expected a declaration or 'formula', found {found!r}")
        self.take()
        self.expect(":")
        f = self.formula()
        if self.at(";"):
            self.take()
        self.expect_kind("eof", "end of input")
        return SpecFile(self.sig, f, options)

    # formulas
    def formula(self) -> Formula:
        if self.at("forall") or self.at("exists"):
            return self.quant()
        return self.implies()

    def quant(self) -> Formula:
        q = self.take().text
        name = self.expect_kind("name", "a variable name")
        self.expect(":")
        width = self.expect_int()
        self.expect(".")
        v = Var(name.text, width)
        self.scopes.append({name.text: v})
        try:
            body = self.formula()
        finally:
            self.scopes.pop()
        return (Forall if q == "forall" else Exists)(v, body)

    def implies(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        if self.at("|"):
            self.take()
            return Or(left, self.disj())
        return left

    def conj(self) -> Formula:
        left = self.until()
        if self.at("&"):
            self.take()
            return And(left, self.conj())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.at("U") or self.at("R"):
            op = self.take().text
            right = self.until()
            return Until(left, right) if op == "U" else Release(left, right)
        return left

    def unary(self) -> Formula:
        if self.at("!"):
            self.take()
            arg = self.unary()
            if isinstance(arg, Atom):
                return Atom(arg.lhs, arg.rel, arg.rhs, not arg.negated)
            return Not(arg)
        for kw, node in (("X", Next), ("WX", WeakNext), ("F", Finally), ("G", Globally)):
            if self.at(kw):
                self.take()
                return node(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.quant()
        return self.primary()

    def primary(self) -> Formula:
        if self.at("true"):
            self.take()
            return TRUE
        if self.at("false"):
            self.take()
            return FALSE
        if self.at("("):
            open_tok = self.take()
            if self.tok.kind == "eof":
                raise self.error("unclosed '('", open_tok)
            f = self.formula()
            if not self.at(")"):
                if self.tok.kind == "eof":
                    raise self.error("unclosed '('", open_tok)
                raise self.error(f"expected ')', found {self.tok.text!r}")
            self.take()
            return f
        start = self.tok
        if start.kind == "eof":
            raise self.error("unexpected end of input")
        lhs = self.term()
        if not (self.tok.kind == "sym" and self.tok.text in RELS):
            found = self.tok.text or "end of input"
            raise self.error(f"expected a comparison operator, found {found!r}")
        rel = self.take().text
        rhs = self.term()
        if lhs.width is not None and rhs.width is not None and lhs.width != rhs.width:
            raise self.error(
                f"comparing a {lhs.width}-bit term with a {rhs.width}-bit term",
                start, SpecWidthError)
        return Atom(lhs, rel, rhs)

    def term(self) -> Term:
        tok = self.tok
        if self.at(">>"):
            self.take()
            k = 1
            if self.at("^"):
                self.take()
                k = self.expect_int()
            return nxt(k, self.term())
        if tok.kind == "bits":
            self.take()
            return const(tok.text[2:])
        if tok.kind == "name":
            self.take()
            if self.at("("):
                self.take()
                fn = self.sig.functions.get(tok.text)
                if fn is None:
                    raise self.error(f"undeclared function {tok.text!r}", tok, UndeclaredIdentifier)
                arg = self.term()
                self.expect(")")
                try:
                    return app(fn, arg)
                except WidthError as exc:
                    raise self.error(str(exc), tok, SpecWidthError) from None
            for scope in reversed(self.scopes):
                if tok.text in scope:
                    return Term(scope[tok.text])
            if tok.text in self.sig.constants:
                return const(self.sig.constants[tok.text])
            raise self.error(f"undeclared identifier {tok.text!r}", tok, UndeclaredIdentifier)
        found = tok.text or "end of input"
        raise self.error(f"expected a term, found {found!r}")


def parse_spec(text: str, sig: Signature | None = None) -> SpecFile:
    return _Parser(text, sig).spec()


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    p.expect_kind("eof", "end of input")
    return f


def _functions_in(f: Formula) -> dict:
    found = {}

    def ground(g):
        while isinstance(g, Apply):
            if isinstance(g.fn, BoolFn):
                found[g.fn.label] = g.fn
            g = g.arg

    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            for t in (g.lhs, g.rhs):
                ground(t.base)
                for op in t.ops:
                    if op is not None:
                        found[op.label] = op
        stack.extend(g.children())
    return found


def spec_text(f: Formula, options: dict | None = None) -> str:
    """A spec file declaring every fixed function used by ``f`` (all must be named)."""
    lines = []
    for name, fn in sorted(_functions_in(f).items()):
        if fn.name is None:
            raise ValueError("anonymous functions cannot be written to a spec file")
        table = ", ".join(map(str, fn.table))
        lines.append(f"fn {name}:{fn.in_width}->{fn.out_width} = [{table}];")
    for key, value in sorted((options or {}).items()):
        lines.append(f"option {key} = {value};")
    lines.append(f"formula: {to_text(f)}")
    return "\n".join(lines) + "\n"


# property templates

def hamming_ball(u: BitVec, eps: int, include_center: bool = False) -> list[BitVec]:
    """Vectors within Hamming distance ``eps`` of ``u``, by distance then flip positions."""
    if eps < 0 or eps > u.width:
        raise ValueError(f"eps={eps} outside 0..{u.width}")
    out = [u] if include_center else []
    for r in range(1, eps + 1):
        for pos in itertools.combinations(range(u.width), r):
            bits = list(u.bits)
            for p in pos:
                bits[p] ^= 1
            out.append(BitVec(tuple(bits)))
    return out


def gen_robustness(u: BitVec, eps: int, n_blocks: int, sample: int | None = None, seed: int = 0) -> Formula:
    """Conjunction of ``>>^n u = >>^n b`` over the Hamming ball around ``u``.

    With ``sample=None`` every neighbour is enumerated; otherwise ``sample``
    distinct neighbours are drawn with a PRNG seeded by ``seed``.
    """
    if eps > u.width:
        raise ValueError(f"eps={eps} exceeds the input width {u.width}")
    if sample is None:
        points = hamming_ball(u, eps)
    else:
        available = sum(_binom(u.width, r) for r in range(1, eps + 1))
        if sample > available:
            raise ValueError(f"cannot draw {sample} distinct points from {available}")
        rng = random.Random(seed)
        chosen: dict = {}
        while len(chosen) < sample:
            r = rng.randint(1, eps)
            pos = rng.sample(range(u.width), r)
            bits = list(u.bits)
            for p in pos:
                bits[p] ^= 1
            chosen.setdefault(BitVec(tuple(bits)), None)
        points = list(chosen)
    lhs = nxt(n_blocks, const(u))
    return conj(Atom(lhs, "=", nxt(n_blocks, const(b))) for b in points)


def _binom(n, k):
    from math import comb

    return comb(n, k)


@dataclass(frozen=True)
class ProperPair:
    """Two inputs that differ only in the sensitive bit range ``[start, start+length)``."""

    a: BitVec
    b: BitVec
    sensitive: tuple[int, int]

    def __post_init__(self):
        start, length = self.sensitive
        if self.a.width != self.b.width:
            raise WidthError("pair members differ in width")
        if start < 0 or length < 1 or start + length > self.a.width:
            raise ValueError("sensitive range outside the vector")
        inside = range(start, start + length)
        if all(self.a[i] == self.b[i] for i in inside):
            raise ValueError("pair does not differ in the sensitive attribute")
        if any(self.a[i] != self.b[i] for i in range(self.a.width) if i not in inside):
            raise ValueError("pair differs outside the sensitive attribute")


def proper_pairs(width: int, sensitive: tuple[int, int]) -> list[ProperPair]:
    """Every unordered proper pair of ``width``-bit inputs."""
    start, length = sensitive
    others = [i for i in range(width) if not start <= i < start + length]
    out = []
    for rest in itertools.product((0, 1), repeat=len(others)):
        variants = []
        for sval in itertools.product((0, 1), repeat=length):
            bits = [0] * width
            for i, v in zip(others, rest):
                bits[i] = v
            for j, v in enumerate(sval):
                bits[start + j] = v
            variants.append(BitVec(tuple(bits)))
        for a, b in itertools.combinations(variants, 2):
            out.append(ProperPair(a, b, sensitive))
    return out


def pairs_from_rows(rows, sensitive: tuple[int, int]) -> list[ProperPair]:
    """Proper pairs obtained by rewriting the sensitive attribute of each row."""
    start, length = sensitive
    seen = {}
    for row in rows:
        for sval in itertools.product((0, 1), repeat=length):
            bits = list(row.bits)
            bits[start:start + length] = sval
            other = BitVec(tuple(bits))
            if other == row:
                continue
            key = frozenset((row, other))
            if key not in seen:
                a, b = sorted((row, other), key=lambda v: v.bits)
                seen[key] = ProperPair(a, b, sensitive)
    return list(seen.values())


def read_csv_rows(path) -> list[BitVec]:
    """Binarized dataset rows: one 0/1 value per column; a non-numeric header is skipped."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), 1):
            cells = [c.strip() for c in rec if c.strip() != ""]
            if not cells:
                continue
            if lineno == 1 and not all(c in ("0", "1") for c in cells):
                continue
            if not all(c in ("0", "1") for c in cells):
                raise ValueError(f"{path}:{lineno}: expected 0/1 columns")
            rows.append(BitVec(tuple(int(c) for c in cells)))
    if rows and len({r.width for r in rows}) != 1:
        raise ValueError(f"{path}: rows have different widths")
    return rows


def gen_fairness(
    pairs: list[ProperPair],
    length: int | None = None,
    flexible: tuple[int, int] | None = None,
    out_width: int | None = None,
) -> Formula:
    """Fairness over proper pairs.

    ``length=n`` gives the conjunction of ``>>^n a_i = >>^n b_i``.
    ``flexible=(n1, n2)`` gives the architecture-search template

        exists x_i, y_i . F(& x_i = y_i) & (& (x_i = >>^n1 a_i & y_i = >>^n1 b_i)
                                          | & (x_i = >>^n2 a_i & y_i = >>^n2 b_i))

    where the witnesses x_i, y_i are ``out_width``-bit outputs.
    """
    if not pairs:
        raise ValueError("need at least one proper pair")
    width = pairs[0].a.width
    if any(p.a.width != width or p.b.width != width for p in pairs):
        raise WidthError("proper pairs have different widths")
    if (length is None) == (flexible is None):
        raise ValueError("give exactly one of length= or flexible=")
    if length is not None:
        return conj(Atom(nxt(length, const(p.a)), "=", nxt(length, const(p.b))) for p in pairs)
    n1, n2 = flexible
    ow = out_width or width
    xs = [Var(f"x{i}", ow) for i in range(len(pairs))]
    ys = [Var(f"y{i}", ow) for i in range(len(pairs))]

    def branch(k):
        parts = []
        for x, y, p in zip(xs, ys, pairs):
            parts.append(Atom(Term(x), "=", nxt(k, const(p.a))))
            parts.append(Atom(Term(y), "=", nxt(k, const(p.b))))
        return conj(parts)

    body = And(
        Finally(conj(Atom(Term(x), "=", Term(y)) for x, y in zip(xs, ys))),
        Or(branch(n1), branch(n2)),
    )
    for x, y in reversed(list(zip(xs, ys))):
        body = Exists(x, Exists(y, body))
    return body
