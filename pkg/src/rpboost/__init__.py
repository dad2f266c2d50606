"""Boosted ridge regression classifiers trained in random subspaces."""

from .boosting import (
    BoostConfig,
    BoostTrace,
    Ensemble,
    fit_method,
    train_rpboost,
    train_rprrc,
    train_rrc,
    train_rrcboost,
    train_stumpboost,
)
from .data import Dataset, SplitSpec, load_csv, load_libsvm, split, synth_gaussian
from .randomness import Rng

__version__ = "0.1.0"
