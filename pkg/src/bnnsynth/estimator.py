"""scikit-learn style front end: fit a lookup-table BNN to labelled 0/1 rows,
optionally under a BLTL property, and use it to predict."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bits import BitVec, bin_, dec
from .errors import BnnSynthError
from .frontend import SpecFile, parse_spec
from .logic import And, Atom, Formula, conj
from .solver import BlockShape
from .synthesis import Failure, SynthConfig, complete_blocks, policy_from_name, synthesize
from .terms import const, nxt


def check_binary(X, name="X") -> np.ndarray:
    """A 2-D integer array holding only 0 and 1."""
    X = check_array(X, dtype=np.int64, ensure_2d=True)
    if not np.isin(X, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    return X


def _labels_to_bits(y):
    y = np.asarray(y)
    if y.ndim == 1:
        y = check_array(y.reshape(-1, 1), dtype=np.int64)[:, 0]
        if (y < 0).any():
            raise ValueError("labels must be non-negative integers")
        width = max(1, int(y.max()).bit_length()) if len(y) else 1
        return [bin_(int(v), width) for v in y], width, True
    Y = check_binary(y, "y")
    return [BitVec(tuple(int(b) for b in row)) for row in Y], Y.shape[1], False


class BLTLSynthesizer(BaseEstimator, TransformerMixin):
    """Synthesizes an ``length``-block network mapping each training row to its label.

    ``spec`` is an optional spec-file text (or parsed SpecFile / Formula)
    conjoined with the input-output facts. ``hidden_width`` fixes the width
    of every intermediate layer; by default it is inferred.
    """

    def __init__(self, spec=None, length=1, hidden_width=None, policy="zero", seed=0,
                 node_limit=200_000):
        self.spec = spec
        self.length = length
        self.hidden_width = hidden_width
        self.policy = policy
        self.seed = seed
        self.node_limit = node_limit

    def _property(self):
        if self.spec is None:
            return None, None
        if isinstance(self.spec, Formula):
            return self.spec, None
        sf = self.spec if isinstance(self.spec, SpecFile) else parse_spec(self.spec)
        return sf.formula, sf.signature

    def fit(self, X, y=None):
        if not isinstance(self.length, int) or self.length < 1:
            raise ValueError("length must be a positive integer")
        prop, sig = self._property()
        facts = []
        in_width = out_width = None
        self.label_vector_ = True
        if y is not None:
            X = check_binary(X)
            ys, out_width, self.label_vector_ = _labels_to_bits(y)
            if len(ys) != X.shape[0]:
                raise ValueError("X and y have different numbers of rows")
            in_width = X.shape[1]
            for row, target in zip(X, ys):
                x = BitVec(tuple(int(b) for b in row))
                facts.append(Atom(nxt(self.length, const(x)), "=", const(target)))
        elif prop is None:
            raise ValueError("fit needs labels or a spec")
        phi = conj(facts)
        if prop is not None:
            phi = And(prop, phi) if facts else prop
        shapes = None
        if self.hidden_width is not None and in_width is not None:
            widths = [in_width] + [self.hidden_width] * (self.length - 1) + [out_width]
            shapes = [BlockShape(a, b) for a, b in zip(widths, widths[1:])]
        cfg = SynthConfig(length=self.length, shapes=shapes, node_limit=self.node_limit,
                          default_width=in_width)
        result = synthesize(phi, cfg, sig)
        if isinstance(result, Failure):
            raise BnnSynthError("no network of this length satisfies the data and the property")
        self.result_ = result
        self.model_ = complete_blocks(result, policy_from_name(self.policy, self.seed))
        self.n_features_in_ = self.model_.in_width
        self.out_width_ = self.model_.out_width
        return self

    def transform(self, X):
        """Network outputs as 0/1 rows."""
        check_is_fitted(self, "model_")
        X = check_binary(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        out = [self.model_.apply_int(dec(row)) for row in X.tolist()]
        return np.array([bin_(v, self.out_width_).bits for v in out], dtype=np.int64)

    def predict(self, X):
        bits = self.transform(X)
        if self.label_vector_:
            return np.array([dec(row) for row in bits.tolist()], dtype=np.int64)
        return bits

    def score(self, X, y):
        """Share of rows whose prediction matches ``y`` exactly."""
        pred = self.predict(X)
        y = np.asarray(y)
        if pred.ndim == 1:
            return float(np.mean(pred == y))
        return float(np.mean((pred == y).all(axis=1)))
