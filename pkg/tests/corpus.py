"""Shared random corpus: formulas and models for the agreement checks."""
import random
from functools import lru_cache

from bnnsynth.random_gen import random_nnf, random_square_model

WIDTHS = (1, 2, 3)
FORMULAS_PER_WIDTH = 170
MODELS_PER_WIDTH = 8


@lru_cache(maxsize=None)
def corpus(width: int):
    rng = random.Random(7919 * width)
    formulas = [random_nnf(rng, width) for _ in range(FORMULAS_PER_WIDTH)]
    models = [random_square_model(rng, width) for _ in range(MODELS_PER_WIDTH)]
    return formulas, models


def all_formulas():
    return [f for w in WIDTHS for f in corpus(w)[0]]


def all_models():
    return [m for w in WIDTHS for m in corpus(w)[1]]
