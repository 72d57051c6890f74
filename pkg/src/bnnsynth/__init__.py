"""BLTL model checking and synthesis for binarized neural networks viewed as
chains of lookup-table blocks."""
from .bits import BitVec, BnnModel, BoolFn, bin_, dec, dump_model, extractor, hamming, identity, load_model
from .errors import (
    BnnSynthError,
    EncodingError,
    ExpansionError,
    InconsistentModel,
    NotApplicable,
    ResourceLimit,
    SpecSyntaxError,
    UnboundVariable,
    WidthError,
)
from .logic import Signature, expand_derived, to_nnf, to_text
from .semantics import satisfies
from .frontend import parse_formula, parse_spec

__version__ = "0.1.0"

__all__ = [
    "BitVec",
    "BnnModel",
    "BoolFn",
    "BnnSynthError",
    "EncodingError",
    "ExpansionError",
    "InconsistentModel",
    "NotApplicable",
    "ResourceLimit",
    "Signature",
    "SpecSyntaxError",
    "UnboundVariable",
    "WidthError",
    "bin_",
    "dec",
    "dump_model",
    "expand_derived",
    "extractor",
    "hamming",
    "identity",
    "load_model",
    "parse_formula",
    "parse_spec",
    "satisfies",
    "to_nnf",
    "to_text",
]
