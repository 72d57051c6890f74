"""Bit vectors, lookup-table Boolean functions and BNN models.

Bit index 0 is the most significant bit, so ``dec((0, 1, 1)) == 3``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import WidthError

__all__ = [
    "BitVec",
    "BoolFn",
    "BnnModel",
    "dec",
    "bin_",
    "identity",
    "extractor",
    "hamming",
    "load_model",
    "dump_model",
]


@dataclass(frozen=True)
class BitVec:
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise WidthError("bit vectors need width >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"not a 0-1 vector: {self.bits!r}")

    @property
    def width(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return dec(self)

    @classmethod
    def from_int(cls, d: int, width: int) -> "BitVec":
        return bin_(d, width)

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        return cls(tuple(int(c) for c in s))

    def __str__(self):
        return "".join(map(str, self.bits))

    def __repr__(self):
        return f"BitVec('{self}')"

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]


def dec(b: BitVec | Sequence[int]) -> int:
    bits = b.bits if isinstance(b, BitVec) else tuple(b)
    d = 0
    for bit in bits:
        d = (d << 1) | bit
    return d


def bin_(d: int, width: int) -> BitVec:
    """Inverse of :func:`dec` at a fixed width."""
    if width < 1:
        raise WidthError("width must be >= 1")
    if not 0 <= d < (1 << width):
        raise WidthError(f"{d} does not fit in {width} bits")
    return BitVec(tuple((d >> (width - 1 - i)) & 1 for i in range(width)))


def hamming(a: BitVec, b: BitVec) -> int:
    if a.width != b.width:
        raise WidthError("hamming distance needs equal widths")
    return sum(x != y for x, y in zip(a.bits, b.bits))


# largest block input width accepted (a table has 2^in_width entries)
MAX_IN_WIDTH = 16


@dataclass(frozen=True)
class BoolFn:
    """A total function B^in_width -> B^out_width stored as a table of dec values.

    ``table[d]`` is ``dec(f(bin(d, in_width)))``. The name only matters for
    printing and is ignored by equality.
    """

    in_width: int
    out_width: int
    table: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.in_width < 1 or self.out_width < 1:
            raise WidthError("function widths must be >= 1")
        if self.in_width > MAX_IN_WIDTH:
            raise WidthError(f"input width {self.in_width} exceeds the cap of {MAX_IN_WIDTH}")
        if len(self.table) != 1 << self.in_width:
            raise WidthError(
                f"table has {len(self.table)} entries, expected {1 << self.in_width}"
            )
        top = 1 << self.out_width
        for v in self.table:
            if not 0 <= v < top:
                raise WidthError(f"table value {v} does not fit in {self.out_width} bits")
        object.__setattr__(self, "table", tuple(self.table))
        object.__setattr__(self, "_h", hash((self.in_width, self.out_width, self.table)))

    def __hash__(self):
        return self._h

    def __call__(self, b: BitVec) -> BitVec:
        if b.width != self.in_width:
            raise WidthError(
                f"{self.label} expects {self.in_width} bits, got {b.width}"
            )
        return bin_(self.table[dec(b)], self.out_width)

    def apply_int(self, d: int) -> int:
        return self.table[d]

    @property
    def label(self) -> str:
        return self.name or f"<fn {self.in_width}->{self.out_width}>"

    def then(self, g: "BoolFn") -> "BoolFn":
        """Composition ``g o self``."""
        if g.in_width != self.out_width:
            raise WidthError("cannot compose: widths differ")
        return BoolFn(self.in_width, g.out_width, tuple(g.table[v] for v in self.table))

    def __repr__(self):
        if self.name:
            return f"BoolFn({self.name})"
        return f"BoolFn({self.in_width}->{self.out_width}, {list(self.table)})"


def identity(width: int) -> BoolFn:
    return BoolFn(width, width, tuple(range(1 << width)), name=f"id{width}")


def extractor(width: int, start: int, length: int, name: str | None = None) -> BoolFn:
    """Segment extraction e_i: bits [start, start+length) of a width-bit input."""
    if start < 0 or length < 1 or start + length > width:
        raise WidthError("segment outside the vector")
    shift = width - start - length
    mask = (1 << length) - 1
    table = tuple((d >> shift) & mask for d in range(1 << width))
    return BoolFn(width, length, table, name=name)


@dataclass(frozen=True)
class BnnModel:
    """A BNN as the block sequence f_0 .. f_{n-1}; the network computes f_{n-1} o ... o f_0.

    An empty block list is accepted so that end-of-word behaviour can be
    exercised; synthesis never produces one.
    """

    blocks: tuple[BoolFn, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for i in range(len(self.blocks) - 1):
            if self.blocks[i].out_width != self.blocks[i + 1].in_width:
                raise WidthError(
                    f"block {i} outputs {self.blocks[i].out_width} bits but block "
                    f"{i + 1} expects {self.blocks[i + 1].in_width}"
                )

    def __len__(self):
        return len(self.blocks)

    @property
    def in_width(self) -> int | None:
        return self.blocks[0].in_width if self.blocks else None

    @property
    def out_width(self) -> int | None:
        return self.blocks[-1].out_width if self.blocks else None

    @property
    def architecture(self) -> list[int]:
        if not self.blocks:
            return []
        return [self.blocks[0].in_width] + [f.out_width for f in self.blocks]

    def block(self, i: int, width: int | None = None) -> BoolFn:
        """Block ``i``, or the identity past the end of the network."""
        if i < len(self.blocks):
            return self.blocks[i]
        if width is None:
            raise WidthError("identity padding needs a width")
        return identity(width)

    def __call__(self, b: BitVec) -> BitVec:
        for f in self.blocks:
            b = f(b)
        return b

    def apply_int(self, d: int) -> int:
        for f in self.blocks:
            d = f.table[d]
        return d

    def to_dict(self) -> dict:
        return {
            "blocks": [
                {"in_width": f.in_width, "out_width": f.out_width, "table": list(f.table)}
                for f in self.blocks
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BnnModel":
        try:
            raw = data["blocks"]
        except (KeyError, TypeError):
            raise ValueError("model JSON needs a 'blocks' list") from None
        blocks = []
        for i, blk in enumerate(raw):
            try:
                n, m, table = blk["in_width"], blk["out_width"], blk["table"]
            except (KeyError, TypeError):
                raise ValueError(f"block {i}: needs in_width, out_width and table") from None
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in table):
                raise ValueError(f"block {i}: table entries must be integers")
            blocks.append(BoolFn(int(n), int(m), tuple(table), name=f"f{i}"))
        return cls(tuple(blocks))


def load_model(path) -> BnnModel:
    with open(path) as fh:
        return BnnModel.from_dict(json.load(fh))


def dump_model(model: BnnModel, path=None) -> str:
    text = json.dumps(model.to_dict(), sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def all_vectors(width: int) -> Iterable[BitVec]:
    for d in range(1 << width):
        yield bin_(d, width)
