"""Synthesis driver: tableau search + solving, table completion and metrics."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bits import BitVec, BnnModel, BoolFn, bin_, hamming
from .errors import WidthError
from .logic import DEFAULT_EXPANSION, Exists, ExpansionConfig, Formula, Signature, expand_derived
from .solver import BlockShape, PartialMappings, extract_mappings, witnesses
from .tableau import SearchConfig, Tableau, check

__all__ = [
    "SynthConfig",
    "SynthResult",
    "Failure",
    "CompletionPolicy",
    "ConstantZero",
    "NearestSpecified",
    "SeededRandom",
    "policy_from_name",
    "prepare",
    "synthesize",
    "synthesize_many",
    "complete_blocks",
    "verify_model",
    "Fairness",
    "Robustness",
    "evaluate_metric",
]


@dataclass
class SynthConfig:
    """``length=None`` is free mode (depth bounded by the threshold)."""

    length: int | None = None
    shapes: list | None = None
    bounds: dict | None = None
    num_solutions: int = 1
    node_limit: int | None = 200_000
    depth_limit: int | None = None
    prune_isomorphic: bool = True
    default_width: int | None = None
    trace: bool = False
    expansion: ExpansionConfig = DEFAULT_EXPANSION

    def __post_init__(self):
        if self.length is not None and self.length < 1:
            raise ValueError("length must be >= 1")
        if self.shapes is not None:
            self.shapes = [s if isinstance(s, BlockShape) else BlockShape(*s) for s in self.shapes]
            if self.length is None:
                self.length = len(self.shapes)
            if len(self.shapes) != self.length:
                raise ValueError("need one shape per block")
            for a, b in zip(self.shapes, self.shapes[1:]):
                if a.out_width != b.in_width:
                    raise WidthError("block shapes do not chain")
        if self.num_solutions < 1:
            raise ValueError("num_solutions must be >= 1")


@dataclass
class SynthResult:
    length: int
    shapes: list
    mappings: PartialMappings
    stats: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    atoms: tuple = ()

    def to_dict(self) -> dict:
        out = {"result": "success", **self.mappings.to_dict()}
        out["stats"] = dict(self.stats)
        if self.witnesses:
            out["witnesses"] = {v.name: str(b) for v, b in sorted(self.witnesses.items(), key=lambda kv: kv[0].name)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class Failure:
    reason: str = "search exhausted"
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"result": "failure", "reason": self.reason, "stats": dict(self.stats)}


def prepare(phi: Formula, sig: Signature | None = None, expansion: ExpansionConfig = DEFAULT_EXPANSION):
    """Strip leading existentials into solver unknowns and expand the rest to NNF."""
    unknowns = []
    body = phi
    while isinstance(body, Exists):
        unknowns.append(body.var)
        body = body.body
    if len({v.name for v in unknowns}) != len(unknowns):
        raise ValueError("leading existential variables must have distinct names")
    nnf = expand_derived(body, sig, expansion, free=unknowns)
    return nnf, unknowns


def synthesize_many(phi: Formula, cfg: SynthConfig | None = None, sig: Signature | None = None):
    """Up to ``cfg.num_solutions`` results with distinct architectures, and the search stats."""
    cfg = cfg or SynthConfig()
    nnf, unknowns = prepare(phi, sig, cfg.expansion)
    scfg = SearchConfig(
        length=cfg.length,
        shapes=cfg.shapes,
        bounds=cfg.bounds,
        depth_limit=cfg.depth_limit,
        node_limit=cfg.node_limit,
        num_solutions=cfg.num_solutions,
        prune_isomorphic=cfg.prune_isomorphic,
        default_width=cfg.default_width,
        trace=cfg.trace,
    )
    engine = Tableau(nnf, None, scfg, unknowns=unknowns)
    paths = engine.search()
    stats = engine.stats.to_dict()
    stats["threshold"] = engine.limit if cfg.length is None else None
    results = []
    for path in paths:
        mappings = extract_mappings(path.values, path.registry, path.shapes)
        results.append(SynthResult(
            length=path.depth,
            shapes=list(path.shapes),
            mappings=mappings,
            stats=stats,
            witnesses=witnesses(path.values, path.registry),
            atoms=path.atoms,
        ))
    return results, engine.stats


def synthesize(phi: Formula, cfg: SynthConfig | None = None, sig: Signature | None = None):
    """A SynthResult, or Failure when no network within the depth bound exists."""
    cfg = cfg or SynthConfig()
    results, stats = synthesize_many(phi, cfg, sig)
    if not results:
        return Failure(stats=stats.to_dict())
    return results[0]


# completion of partial tables

class CompletionPolicy:
    def fill(self, index: int, shape: BlockShape, mapping: dict) -> list:
        raise NotImplementedError


class ConstantZero(CompletionPolicy):
    def fill(self, index, shape, mapping):
        return [mapping.get(d, 0) for d in range(1 << shape.in_width)]

    def __repr__(self):
        return "ConstantZero()"


class NearestSpecified(CompletionPolicy):
    """Copy the output of the Hamming-nearest specified input (lowest value on ties)."""

    def fill(self, index, shape, mapping):
        keys = sorted(mapping)
        if not keys:
            return [0] * (1 << shape.in_width)
        vecs = {k: bin_(k, shape.in_width) for k in keys}
        table = []
        for d in range(1 << shape.in_width):
            if d in mapping:
                table.append(mapping[d])
                continue
            b = bin_(d, shape.in_width)
            best = min(keys, key=lambda k: (hamming(b, vecs[k]), k))
            table.append(mapping[best])
        return table

    def __repr__(self):
        return "NearestSpecified()"


class SeededRandom(CompletionPolicy):
    def __init__(self, seed: int = 0):
        self.seed = seed

    def fill(self, index, shape, mapping):
        rng = random.Random(self.seed * 1_000_003 + index)
        top = (1 << shape.out_width) - 1
        return [mapping[d] if d in mapping else rng.randint(0, top) for d in range(1 << shape.in_width)]

    def __repr__(self):
        return f"SeededRandom({self.seed})"


def policy_from_name(name: str, seed: int = 0) -> CompletionPolicy:
    if name == "zero":
        return ConstantZero()
    if name == "nearest":
        return NearestSpecified()
    if name == "random":
        return SeededRandom(seed)
    raise ValueError(f"unknown completion policy {name!r}")


def complete_blocks(sr: SynthResult, policy: CompletionPolicy | None = None) -> BnnModel:
    """A concrete model honouring every mapping of ``sr``; other entries per ``policy``."""
    policy = policy or ConstantZero()
    blocks = []
    for i, shape in enumerate(sr.shapes):
        mapping = sr.mappings.table.get(i, {})
        for k, v in mapping.items():
            if not (0 <= k < 1 << shape.in_width and 0 <= v < 1 << shape.out_width):
                raise WidthError(f"mapping {k}->{v} does not fit block {i} of shape {shape}")
        table = policy.fill(i, shape, mapping)
        blocks.append(BoolFn(shape.in_width, shape.out_width, tuple(table), name=f"f{i}"))
    return BnnModel(tuple(blocks))


def verify_model(model: BnnModel, phi: Formula, sig: Signature | None = None,
                 witness: dict | None = None, expansion: ExpansionConfig = DEFAULT_EXPANSION) -> bool:
    """Tableau check of ``phi`` on ``model``, with leading existentials bound to ``witness``
    when given (otherwise unfolded over their domain)."""
    body = phi
    if witness:
        env = {}
        while isinstance(body, Exists) and body.var in witness:
            env[body.var] = witness[body.var]
            body = body.body
        nnf = expand_derived(body, sig, expansion, env=env)
    else:
        nnf = expand_derived(phi, sig, expansion)
    return check(model, nnf)


# metrics

@dataclass(frozen=True)
class Fairness:
    pairs: tuple


@dataclass(frozen=True)
class Robustness:
    u: BitVec
    eps: int


def evaluate_metric(model: BnnModel, metric) -> Fraction:
    """Fairness score (share of pairs mapped alike) or attack-success rate
    (share of ball points whose output differs from that of the centre)."""
    if isinstance(metric, Fairness):
        pairs = list(metric.pairs)
        if not pairs:
            return Fraction(1)
        same = sum(model(p.a) == model(p.b) for p in pairs)
        return Fraction(same, len(pairs))
    if isinstance(metric, Robustness):
        from .frontend import hamming_ball

        points = hamming_ball(metric.u, metric.eps)
        if not points:
            return Fraction(0)
        ref = model(metric.u)
        return Fraction(sum(model(b) != ref for b in points), len(points))
    raise TypeError(f"unknown metric {metric!r}")
