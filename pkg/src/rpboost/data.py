"""Datasets: loading, label encoding, synthetic generation and splitting."""

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyDataError,
    FieldParseError,
    LibsvmFormatError,
    MissingFileError,
    RaggedRowError,
    SingleClassError,
)
from .randomness import Rng, shuffled_indices

__all__ = [
    "Dataset",
    "SplitSpec",
    "load_csv",
    "load_libsvm",
    "load_dataset",
    "write_csv",
    "split",
    "standardize",
    "add_intercept",
    "synth_gaussian",
    "describe",
]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix (N x d) with labels in {-1, +1}."""

    features: np.ndarray
    labels: np.ndarray
    names: tuple = None

    def __post_init__(self):
        x = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.float64)
        if x.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {x.shape}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise ValueError(f"{y.shape[0] if y.ndim == 1 else y.shape} labels for {x.shape[0]} rows")
        if not np.all((y == 1.0) | (y == -1.0)):
            raise ValueError("labels must be -1 or +1")
        if self.names is not None and len(self.names) != x.shape[0]:
            raise ValueError("names must have one entry per row")
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)

    @property
    def instance_count(self):
        return self.features.shape[0]

    @property
    def feature_count(self):
        return self.features.shape[1]

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.intp)
        names = None if self.names is None else tuple(self.names[i] for i in idx)
        return Dataset(self.features[idx], self.labels[idx], names)

    def class_counts(self):
        return int(np.sum(self.labels > 0)), int(np.sum(self.labels < 0))

    def require_both_classes(self):
        pos, neg = self.class_counts()
        if pos == 0 or neg == 0:
            raise SingleClassError(f"dataset needs both classes, got {pos} positive / {neg} negative")


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratify: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


def describe(ds):
    """Class-balance summary of a dataset."""
    pos, neg = ds.class_counts()
    return {
        "instances": ds.instance_count,
        "features": ds.feature_count,
        "positive": pos,
        "negative": neg,
        "positive_fraction": pos / ds.instance_count if ds.instance_count else float("nan"),
    }


def _parse_float(token):
    try:
        v = float(token)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _label_matches(token, positive_label):
    token = token.strip()
    if token == positive_label:
        return True
    a, b = _parse_float(token), _parse_float(positive_label)
    return a is not None and b is not None and a == b


def load_csv(path, label_column=0, positive_label="1", labeled=True, require_both_classes=True):
    """Read a comma-separated file into a Dataset.

    Rows whose label token equals ``positive_label`` (textually or
    numerically) become +1, all others -1. A first row with a non-numeric
    feature field is treated as a header. With ``labeled=False`` every column
    is a feature and all labels are set to -1.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise MissingFileError(f"no such file: {path}")
    positive_label = str(positive_label).strip()

    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if width is None:
                width = len(fields)
                lc = _resolve_column(label_column, width) if labeled else None
                feats = [f for j, f in enumerate(fields) if j != lc]
                if any(_parse_float(f) is None for f in feats):
                    continue  # header
            elif len(fields) != width:
                raise RaggedRowError(f"{path}:{lineno}: expected {width} fields, found {len(fields)}")
            rows.append((lineno, fields))

    if not rows:
        raise EmptyDataError(f"{path}: no data rows")

    n = len(rows)
    d = width - 1 if labeled else width
    if d < 1:
        raise EmptyDataError(f"{path}: no feature columns")
    x = np.empty((n, d))
    y = np.full(n, -1.0)
    for i, (lineno, fields) in enumerate(rows):
        if labeled:
            y[i] = 1.0 if _label_matches(fields[lc], positive_label) else -1.0
            feats = fields[:lc] + fields[lc + 1:]
        else:
            feats = fields
        for j, tok in enumerate(feats):
            v = _parse_float(tok)
            if v is None:
                raise FieldParseError(f"{path}:{lineno}: cannot parse {tok!r} as a number")
            x[i, j] = v

    ds = Dataset(x, y)
    if labeled and require_both_classes:
        ds.require_both_classes()
    return ds


def _resolve_column(col, width):
    c = col + width if col < 0 else col
    if not 0 <= c < width:
        raise FieldParseError(f"label column {col} out of range for {width} fields")
    return c


def load_libsvm(path, n_features=None):
    """Read ``<label> <idx>:<val> ...`` lines (1-based indices) into a dense Dataset.

    Labels > 0 map to +1, everything else to -1. Text after ``#`` is ignored.
    ``n_features`` pads the feature count (it may not be exceeded).
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise MissingFileError(f"no such file: {path}")
    labels, entries = [], []
    max_idx = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            lab = _parse_float(tokens[0])
            if lab is None:
                raise LibsvmFormatError(f"{path}:{lineno}: bad label {tokens[0]!r}")
            row = []
            prev = 0
            for tok in tokens[1:]:
                idx_s, sep, val_s = tok.partition(":")
                val = _parse_float(val_s)
                if not sep or not idx_s.isdigit() or val is None:
                    raise LibsvmFormatError(f"{path}:{lineno}: malformed pair {tok!r}")
                idx = int(idx_s)
                if idx < 1:
                    raise LibsvmFormatError(f"{path}:{lineno}: indices are 1-based, got {idx}")
                if idx <= prev:
                    raise LibsvmFormatError(f"{path}:{lineno}: index {idx} does not increase after {prev}")
                prev = idx
                row.append((idx - 1, val))
            max_idx = max(max_idx, prev)
            labels.append(1.0 if lab > 0 else -1.0)
            entries.append(row)

    if not labels:
        raise EmptyDataError(f"{path}: no data rows")
    d = max_idx
    if n_features is not None:
        if max_idx > n_features:
            raise LibsvmFormatError(f"{path}: feature index {max_idx} exceeds expected {n_features}")
        d = n_features
    x = np.zeros((len(labels), max(d, 1)))
    for i, row in enumerate(entries):
        for j, v in row:
            x[i, j] = v
    return Dataset(x, np.array(labels))


def load_dataset(path, fmt=None, label_column=0, positive_label="1"):
    """Dispatch on ``fmt`` ("csv" or "libsvm"); guessed from the extension if None."""
    if fmt is None:
        ext = os.path.splitext(os.fspath(path))[1].lower()
        fmt = "libsvm" if ext in (".libsvm", ".svm", ".svmlight") else "csv"
    if fmt == "csv":
        return load_csv(path, label_column=label_column, positive_label=positive_label)
    if fmt == "libsvm":
        return load_libsvm(path)
    raise ValueError(f"unknown data format {fmt!r}")


def write_csv(ds, path):
    """Label in column 0 as ``1``/``-1``, then features in round-trip float format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for lab, row in zip(ds.labels, ds.features):
            fh.write("1" if lab > 0 else "-1")
            for v in row:
                fh.write(",")
                fh.write(repr(float(v)))
            fh.write("\n")


def _round_half_up(v):
    return int(math.floor(v + 0.5))


def split(ds, spec):
    """Random train/test partition; train size is round-half-up(fraction * N).

    Returns ``(train, test, train_idx, test_idx)``.
    """
    n = ds.instance_count
    if n < 2:
        raise ValueError("need at least 2 instances to split")
    rng = Rng(spec.seed)
    if spec.stratify:
        train_idx, test_idx = [], []
        for cls in (1.0, -1.0):
            members = np.flatnonzero(ds.labels == cls)
            if members.size == 0:
                continue
            perm = members[shuffled_indices(rng, members.size)]
            k = _round_half_up(spec.train_fraction * members.size)
            train_idx.append(perm[:k])
            test_idx.append(perm[k:])
        train_idx = np.sort(np.concatenate(train_idx))
        test_idx = np.sort(np.concatenate(test_idx))
    else:
        perm = shuffled_indices(rng, n)
        k = _round_half_up(spec.train_fraction * n)
        train_idx, test_idx = perm[:k], perm[k:]
    if train_idx.size == 0 or test_idx.size == 0:
        raise ValueError(f"split of {n} instances at {spec.train_fraction} leaves an empty side")
    return ds.subset(train_idx), ds.subset(test_idx), train_idx, test_idx


def standardize(train, *others):
    """Centre and scale features with statistics of ``train`` only.

    Returns the transformed datasets followed by ``(mean, scale)``.
    Constant features get scale 1.
    """
    mean = train.features.mean(axis=0)
    scale = train.features.std(axis=0)
    scale[scale == 0] = 1.0
    out = [Dataset((ds.features - mean) / scale, ds.labels, ds.names) for ds in (train,) + others]
    return (*out, (mean, scale))


def add_intercept(ds):
    """Append a constant-1 feature column."""
    ones = np.ones((ds.instance_count, 1))
    return Dataset(np.hstack([ds.features, ones]), ds.labels, ds.names)


def synth_gaussian(rng, n_per_class, d, informative, shift):
    """Two Gaussian classes, separated by +/-shift on the first ``informative`` axes.

    Rows are the positive class followed by the negative class; remaining
    coordinates are N(0, 1) noise.
    """
    if n_per_class < 1 or d < 1:
        raise ValueError("n_per_class and d must be >= 1")
    if not 0 <= informative <= d:
        raise ValueError(f"informative ({informative}) must be between 0 and d ({d})")
    if shift <= 0:
        raise ValueError(f"shift must be > 0, got {shift}")
    x = rng.standard_normal((2 * n_per_class, d))
    y = np.concatenate([np.ones(n_per_class), -np.ones(n_per_class)])
    x[:, :informative] += shift * y[:, None]
    return Dataset(x, y)
