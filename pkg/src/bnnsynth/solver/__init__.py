from .encode import (
    BlockShape,
    PartialMappings,
    TermRegistry,
    encode,
    extract_mappings,
    infer_shapes,
    relation_cubes,
    witnesses,
)
from .idl import ZERO, ConstraintProblem, DiffAtom, SolveStats, bellman_ford, solve, verify
from .smtlib import export_smtlib, write_smtlib

__all__ = [
    "BlockShape",
    "ConstraintProblem",
    "DiffAtom",
    "PartialMappings",
    "SolveStats",
    "TermRegistry",
    "ZERO",
    "bellman_ford",
    "encode",
    "export_smtlib",
    "extract_mappings",
    "infer_shapes",
    "relation_cubes",
    "solve",
    "verify",
    "witnesses",
    "write_smtlib",
]
