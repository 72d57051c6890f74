"""Command-line interface.

Exit codes: 0 property holds / synthesis succeeded, 1 property fails /
synthesis failed (or ran out of budget), 2 usage or input error.
Results go to stdout (or --out) as JSON; summaries go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .bits import BitVec, dump_model, load_model
from .errors import BnnSynthError, ResourceLimit
from .frontend import (
    gen_fairness,
    gen_robustness,
    pairs_from_rows,
    parse_spec,
    proper_pairs,
    read_csv_rows,
    spec_text,
)
from .logic import ExpansionConfig, expand_derived, to_text
from .semantics import satisfies
from .solver import BlockShape, encode, export_smtlib
from .synthesis import (
    Fairness,
    Robustness,
    SynthConfig,
    complete_blocks,
    evaluate_metric,
    policy_from_name,
    synthesize_many,
)
from .tableau import check


class UsageError(Exception):
    pass


def _emit(obj, out: str | None):
    text = json.dumps(obj, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_spec(path):
    return parse_spec(Path(path).read_text())


def _expansion(sf) -> ExpansionConfig:
    return ExpansionConfig(domain="signature" if sf.quantifiers == "signature" else "full")


def _bits(text: str) -> BitVec:
    text = text.strip()
    if text.startswith("0b"):
        text = text[2:]
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"not a 0/1 string: {text!r}")
    return BitVec.from_str(text)


def _range(text: str) -> tuple[int, int]:
    """``start:length`` or a single index."""
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            return int(a), int(b)
        return int(text), 1
    except ValueError:
        raise UsageError(f"bad sensitive range {text!r}; use START:LENGTH") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def cmd_check(args) -> int:
    sf = _load_spec(args.spec)
    model = load_model(args.model)
    if sf.order == "elementwise":
        holds = satisfies(model, sf.formula, 0, order="elementwise")
    else:
        nnf = expand_derived(sf.formula, sf.signature, _expansion(sf))
        holds = check(model, nnf)
    _emit({"result": "holds" if holds else "violated", "formula": to_text(sf.formula),
           "length": len(model)}, args.out)
    print(f"property {'holds' if holds else 'is violated'} on a {len(model)}-block model",
          file=sys.stderr)
    return 0 if holds else 1


def _synth_config(args) -> SynthConfig:
    shapes = None
    if args.widths:
        w = _int_list(args.widths)
        if len(w) < 2:
            raise UsageError("--widths needs at least two widths")
        shapes = [BlockShape(a, b) for a, b in zip(w, w[1:])]
        if args.length is not None and args.length != len(shapes):
            raise UsageError("--length disagrees with --widths")
    length = None if args.free else args.length
    if length is None and not args.free and shapes is None:
        raise UsageError("give --length N, --widths W0,W1,... or --free")
    return SynthConfig(
        length=length if shapes is None else len(shapes),
        shapes=shapes,
        num_solutions=args.num_solutions,
        node_limit=args.node_limit,
        depth_limit=args.depth_limit,
        trace=args.trace,
    )


def _model_path(base: str, i: int) -> str:
    if i == 0:
        return base
    p = Path(base)
    return str(p.with_name(f"{p.stem}.{i}{p.suffix}"))


def cmd_synth(args) -> int:
    sf = _load_spec(args.spec)
    cfg = _synth_config(args)
    cfg.expansion = _expansion(sf)
    policy = policy_from_name(args.policy, args.seed)
    start = time.perf_counter()
    try:
        results, stats = synthesize_many(sf.formula, cfg, sf.signature)
    except ResourceLimit as exc:
        _emit({"result": "resource-limit", "reason": str(exc)}, args.out)
        print(f"synthesis stopped: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - start
    if not results:
        _emit({"result": "failure", "stats": stats.to_dict()}, args.out)
        print(f"no network found ({stats.nodes} nodes, {elapsed:.2f}s)", file=sys.stderr)
        return 1
    docs = []
    for i, r in enumerate(results):
        doc = r.to_dict()
        if args.model_out:
            path = _model_path(args.model_out, i)
            dump_model(complete_blocks(r, policy), path)
            doc["model"] = path
        docs.append(doc)
    if len(docs) == 1:
        _emit(docs[0], args.out)
    else:
        _emit({"result": "success", "solutions": docs}, args.out)
    lengths = ", ".join(str(r.length) for r in results)
    print(f"found {len(results)} architecture(s) of length {lengths} "
          f"({stats.nodes} nodes, {elapsed:.2f}s)", file=sys.stderr)
    return 0


def cmd_gen_spec(args) -> int:
    if args.kind == "robustness":
        if not args.u or args.eps is None or args.blocks is None:
            raise UsageError("robustness needs --u, --eps and --blocks")
        phi = gen_robustness(_bits(args.u), args.eps, args.blocks, args.sample, args.seed)
    else:
        if args.sensitive is None:
            raise UsageError("fairness needs --sensitive START:LENGTH")
        sens = _range(args.sensitive)
        if args.csv:
            pairs = pairs_from_rows(read_csv_rows(args.csv), sens)
        elif args.width:
            pairs = proper_pairs(args.width, sens)
        else:
            raise UsageError("fairness needs --width or --csv")
        if (args.length is None) == (args.flexible is None):
            raise UsageError("fairness needs exactly one of --length or --flexible")
        flexible = None
        if args.flexible:
            f = _int_list(args.flexible)
            if len(f) != 2:
                raise UsageError("--flexible takes two lengths N1,N2")
            flexible = (f[0], f[1])
        phi = gen_fairness(pairs, length=args.length, flexible=flexible, out_width=args.out_width)
    text = spec_text(phi)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_smt(args) -> int:
    sf = _load_spec(args.spec)
    cfg = _synth_config(args)
    cfg.expansion = _expansion(sf)
    results, _ = synthesize_many(sf.formula, cfg, sf.signature)
    if not results:
        _emit({"result": "failure"}, None)
        print("no success path to export", file=sys.stderr)
        return 1
    r = results[0]
    problem, _ = encode(r.atoms, r.shapes, cfg.bounds)
    Path(args.path).write_text(export_smtlib(problem))
    _emit({"result": "success", "path": args.path, "atoms": len(r.atoms),
           "variables": problem.num_vars - 1, "clauses": len(problem.clauses)}, None)
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    if args.metric == "fairness":
        if args.sensitive is None:
            raise UsageError("fairness needs --sensitive START:LENGTH")
        sens = _range(args.sensitive)
        if args.csv:
            pairs = pairs_from_rows(read_csv_rows(args.csv), sens)
        else:
            if model.in_width is None:
                raise UsageError("model has no blocks")
            pairs = proper_pairs(model.in_width, sens)
        value = evaluate_metric(model, Fairness(tuple(pairs)))
        extra = {"pairs": len(pairs)}
    else:
        if not args.u or args.eps is None:
            raise UsageError("robustness needs --u and --eps")
        value = evaluate_metric(model, Robustness(_bits(args.u), args.eps))
        extra = {}
    _emit({"metric": args.metric, "value": str(value), "float": float(value), **extra}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bnnsynth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="model-check a spec against a model JSON")
    c.add_argument("spec")
    c.add_argument("model")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    def synth_opts(s):
        s.add_argument("--length", type=int)
        s.add_argument("--free", action="store_true")
        s.add_argument("--widths", help="comma-separated layer widths, fixes the architecture")
        s.add_argument("--num-solutions", type=int, default=1)
        s.add_argument("--node-limit", type=int, default=200_000)
        s.add_argument("--depth-limit", type=int)
        s.add_argument("--trace", action="store_true")

    s = sub.add_parser("synth", help="synthesize block mappings for a spec")
    s.add_argument("spec")
    synth_opts(s)
    s.add_argument("--policy", choices=("zero", "nearest", "random"), default="zero")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--model-out")
    s.set_defaults(func=cmd_synth)

    g = sub.add_parser("gen-spec", help="write a robustness or fairness spec")
    g.add_argument("kind", choices=("robustness", "fairness"))
    g.add_argument("--u", help="centre input as a 0/1 string")
    g.add_argument("--eps", type=int)
    g.add_argument("--blocks", type=int)
    g.add_argument("--sample", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--width", type=int)
    g.add_argument("--csv")
    g.add_argument("--sensitive", help="START:LENGTH of the sensitive attribute")
    g.add_argument("--length", type=int)
    g.add_argument("--flexible", help="two candidate lengths N1,N2")
    g.add_argument("--out-width", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_spec)

    e = sub.add_parser("export-smt", help="write the SMT-LIB (QF_IDL) problem of a success path")
    e.add_argument("spec")
    e.add_argument("path")
    synth_opts(e)
    e.set_defaults(func=cmd_export_smt, policy="zero", seed=0)

    v = sub.add_parser("eval", help="fairness score or attack-success rate of a model")
    v.add_argument("model")
    v.add_argument("--metric", choices=("fairness", "robustness"), required=True)
    v.add_argument("--sensitive")
    v.add_argument("--csv")
    v.add_argument("--u")
    v.add_argument("--eps", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trace", False):
        logging.basicConfig(level=logging.DEBUG, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, BnnSynthError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"bnnsynth: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
