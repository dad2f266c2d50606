"""AdaBoost over ridge classifiers, plus the non-boosted and stump baselines.

``train_rpboost`` fits each round's learner as the average of P ridge
classifiers solved in fresh random subspaces and mapped back to feature
space. ``train_rrcboost`` and ``train_stumpboost`` share the same boosting
loop with a full-space weighted ridge and a decision stump respectively.
``train_rprrc`` averages L subspace classifiers under uniform weights with
no boosting at all.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .learners import (
    StumpSearch,
    recover,
    ridge_fit,
    sign_label,
    weighted_ridge_fit,
    weighted_subspace_fit,
)
from .randomness import projection_matrix

__all__ = [
    "BoostConfig",
    "RoundRecord",
    "BoostTrace",
    "Ensemble",
    "METHODS",
    "DISPLAY_NAMES",
    "canonical_method",
    "weighted_error",
    "alpha_from_error",
    "update_weights",
    "exponential_loss",
    "predict_ensemble",
    "train_rpboost",
    "train_rrcboost",
    "train_rprrc",
    "train_stumpboost",
    "train_rrc",
    "fit_method",
]

METHODS = ("rrc", "rrc-boost", "rpboost", "rprrc", "stump-boost")
DISPLAY_NAMES = {
    "rrc": "RRC",
    "rrc-boost": "RRC-Boost",
    "rpboost": "rpBoost",
    "rprrc": "rpRRC",
    "stump-boost": "Stump",
}
_ALIASES = {"stump": "stump-boost", "rrcboost": "rrc-boost", "stumpboost": "stump-boost"}


def canonical_method(name):
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in METHODS:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return key


@dataclass(frozen=True)
class BoostConfig:
    rounds: int = 300
    projections: int = 3
    subspace_dim: int = 3
    lam: float = 0.3
    epsilon_clamp: float = 1e-10
    seed: int = 0
    stop_on_perfect: bool = True
    stop_on_weak: bool = False

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.projections < 1:
            raise ValueError(f"projections must be >= 1, got {self.projections}")
        if self.subspace_dim < 1:
            raise ValueError(f"subspace_dim must be >= 1, got {self.subspace_dim}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be > 0, got {self.lam}")
        if not 0 < self.epsilon_clamp < 0.5:
            raise ValueError(f"epsilon_clamp must lie in (0, 0.5), got {self.epsilon_clamp}")


@dataclass
class RoundRecord:
    epsilon: float
    alpha: float
    loss: float
    fit_time: float
    weight_sum: float
    misclassified_mass: float


@dataclass
class BoostTrace:
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def to_csv(self):
        cols = ["epsilon", "alpha", "loss", "fit_time", "weight_sum", "misclassified_mass"]
        lines = ["round," + ",".join(cols)]
        for k, r in enumerate(self.records, start=1):
            lines.append(f"{k}," + ",".join(repr(float(getattr(r, c))) for c in cols))
        return "\n".join(lines) + "\n"


@dataclass(eq=False)
class Ensemble:
    """Ordered ``(alpha, learner)`` pairs; predicts the sign of the weighted vote."""

    members: list
    method: str = "rpboost"
    config: BoostConfig = field(default_factory=BoostConfig)

    @property
    def alphas(self):
        return np.array([a for a, _ in self.members])

    def decision_function(self, x):
        x = np.asarray(x, dtype=np.float64)
        score = np.zeros(x.shape[:-1])
        for alpha, h in self.members:
            score = score + alpha * h.predict(x)
        return score

    def predict(self, x):
        return sign_label(self.decision_function(x))


def _check_normalized(w):
    s = float(np.sum(w))
    if abs(s - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {s!r}")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")


def weighted_error(h, ds, w):
    """Weight mass of the instances ``h`` misclassifies."""
    w = np.asarray(w, dtype=np.float64)
    _check_normalized(w)
    miss = h.predict(ds.features) != ds.labels
    return float(np.sum(w[miss]))


def alpha_from_error(epsilon, clamp=1e-10):
    """Learner weight ``0.5 * ln((1 - eps) / eps)`` with eps clamped to [clamp, 1 - clamp]."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    e = min(max(epsilon, clamp), 1.0 - clamp)
    return 0.5 * math.log((1.0 - e) / e)


def _reweight(w, y, pred, alpha):
    w = w * np.exp(-alpha * y * pred)
    return w / w.sum()


def update_weights(w, h, alpha, ds):
    """Scale weights by ``exp(-y_i alpha h(x_i))`` and renormalise to sum to 1."""
    w = np.asarray(w, dtype=np.float64)
    return _reweight(w, ds.labels, h.predict(ds.features), alpha)


def predict_ensemble(e, x):
    return float(e.predict(np.asarray(x, dtype=np.float64)))


def exponential_loss(e, ds, w0=None):
    """``sum_i w0_i exp(-y_i sum_k alpha_k h_k(x_i))``; ``w0`` defaults to 1/N."""
    n = ds.instance_count
    w0 = np.full(n, 1.0 / n) if w0 is None else np.asarray(w0, dtype=np.float64)
    with np.errstate(over="ignore"):
        return float(np.sum(w0 * np.exp(-ds.labels * e.decision_function(ds.features))))


def _boost(ds, cfg, fit_round, method):
    """Shared AdaBoost loop; ``fit_round(k, w)`` returns the round's weak learner."""
    ds.require_both_classes()
    n = ds.instance_count
    x, y = ds.features, ds.labels
    w = np.full(n, 1.0 / n)
    margin = np.zeros(n)
    members = []
    trace = BoostTrace()
    for k in range(cfg.rounds):
        t0 = time.perf_counter()
        try:
            h = fit_round(k, w)
        except NumericalError as exc:
            raise type(exc)(f"{method} round {k + 1}: {exc}") from exc
        fit_time = time.perf_counter() - t0

        pred = h.predict(x)
        miss = pred != y
        eps = float(np.sum(w[miss]))
        alpha = alpha_from_error(min(eps, 1.0), cfg.epsilon_clamp)
        w = _reweight(w, y, pred, alpha)
        margin += alpha * pred
        with np.errstate(over="ignore"):
            loss = float(np.mean(np.exp(-y * margin)))
        members.append((alpha, h))
        trace.records.append(
            RoundRecord(eps, alpha, loss, fit_time, float(w.sum()), float(np.sum(w[miss])))
        )
        if eps == 0.0 and cfg.stop_on_perfect:
            break
        if eps >= 0.5 and cfg.stop_on_weak:
            break
    return Ensemble(members, method, cfg), trace


def _default_projection(rng):
    def make(k, p, d, m):
        return projection_matrix(rng.child(k, p), d, m)

    return make


def train_rpboost(ds, cfg, rng, projection_fn=None):
    """Boosted subspace ridge classifiers.

    Each round draws ``cfg.projections`` fresh d x m Gaussian projections
    (stream ``(round, p)`` of ``rng``), fits a weighted ridge in each
    subspace and averages the recovered coefficient vectors.
    ``projection_fn(k, p, d, m)`` overrides the projection source.
    """
    make = projection_fn or _default_projection(rng)
    d, m, lam = ds.feature_count, cfg.subspace_dim, cfg.lam

    def fit_round(k, w):
        fits = []
        for p in range(cfg.projections):
            r = make(k, p, d, m)
            try:
                fits.append(weighted_subspace_fit(ds, w, lam, r))
            except NumericalError as exc:
                raise type(exc)(f"projection {p + 1}: {exc}") from exc
        return recover(fits)

    return _boost(ds, cfg, fit_round, "rpboost")


def train_rrcboost(ds, cfg):
    """Boosted weighted ridge classifiers in the full feature space."""
    return _boost(ds, cfg, lambda k, w: weighted_ridge_fit(ds, w, cfg.lam), "rrc-boost")


def train_stumpboost(ds, cfg):
    search = StumpSearch(ds)
    return _boost(ds, cfg, lambda k, w: search.fit(w), "stump-boost")


def train_rprrc(ds, cfg, rng, projection_fn=None):
    """Average of ``cfg.rounds`` subspace ridge classifiers under uniform weights."""
    ds.require_both_classes()
    make = projection_fn or _default_projection(rng)
    n, d = ds.instance_count, ds.feature_count
    w = np.full(n, 1.0 / n)
    fits = [weighted_subspace_fit(ds, w, cfg.lam, make(l, 0, d, cfg.subspace_dim)) for l in range(cfg.rounds)]
    return recover(fits)


def train_rrc(ds, cfg):
    ds.require_both_classes()
    return ridge_fit(ds, cfg.lam)


def fit_method(method, ds, cfg, rng):
    """Train ``method`` and return ``(Ensemble, BoostTrace or None)``.

    Single classifiers (rrc, rprrc) are wrapped as one-member ensembles
    with alpha = 1.
    """
    method = canonical_method(method)
    if method == "rpboost":
        return train_rpboost(ds, cfg, rng)
    if method == "rrc-boost":
        return train_rrcboost(ds, cfg)
    if method == "stump-boost":
        return train_stumpboost(ds, cfg)
    if method == "rprrc":
        return Ensemble([(1.0, train_rprrc(ds, cfg, rng))], method, cfg), None
    return Ensemble([(1.0, train_rrc(ds, cfg))], method, cfg), None

