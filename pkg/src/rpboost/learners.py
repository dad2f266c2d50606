"""Base classifiers: ridge regression classifiers (full space and random
subspace) and decision stumps.

All linear fits use ``+lam * I`` on the diagonal and never rescale ``lam`` by
the total weight; boosting keeps the weights normalised to sum to one.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ShapeError, SingularSystemError

__all__ = [
    "LinearClassifier",
    "Stump",
    "SubspaceFit",
    "sign_label",
    "ridge_fit",
    "weighted_ridge_fit",
    "weighted_subspace_fit",
    "recover",
    "predict_linear",
    "StumpSearch",
    "stump_fit",
    "predict_stump",
]


def sign_label(score):
    """+1 where score > 0, -1 elsewhere (an exact zero votes -1)."""
    return np.where(np.asarray(score) > 0, 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    beta: np.ndarray
    lam: float = 0.0

    def decision_function(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.beta.shape[0]:
            raise ShapeError(f"expected {self.beta.shape[0]} features, got {x.shape[-1]}")
        return x @ self.beta

    def predict(self, x):
        return sign_label(self.decision_function(x))


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    polarity: int

    def predict(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.feature >= x.shape[-1]:
            raise ShapeError(f"stump uses feature {self.feature} but input has {x.shape[-1]}")
        above = x[..., self.feature] > self.threshold
        return np.where(above, float(self.polarity), -float(self.polarity))


@dataclass(frozen=True, eq=False)
class SubspaceFit:
    """Coefficients ``b`` (length m) fitted on ``X @ r`` where ``r`` is d x m."""

    b: np.ndarray
    r: np.ndarray
    lam: float = 0.0

    def to_original(self):
        return self.r @ self.b


def _check_weights(w, n):
    w = linalg.as_vector(w, "w")
    if w.shape[0] != n:
        raise ShapeError(f"{w.shape[0]} weights for {n} instances")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if not np.any(w > 0):
        raise ValueError("all instance weights are zero")
    return w


def _ridge_solve(x, y, w, lam):
    """Solve ``(X^T W X + lam I) b = X^T W y``; ``w=None`` means W = I."""
    gram = linalg.gram_weighted(x, w)
    gram[np.diag_indices_from(gram)] += lam
    rhs = x.T @ (y if w is None else w * y)
    try:
        return linalg.solve_spd(gram, rhs, overwrite_a=True)
    except SingularSystemError as exc:
        raise SingularSystemError(f"{exc}; try a larger ridge parameter (lambda={lam})") from exc


def ridge_fit(ds, lam):
    """Ridge regression classifier on +/-1 targets, solving ``(X^T X + lam I) beta = X^T y``."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return LinearClassifier(_ridge_solve(ds.features, ds.labels, None, lam), lam)


def weighted_ridge_fit(ds, w, lam):
    w = _check_weights(w, ds.instance_count)
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return LinearClassifier(_ridge_solve(ds.features, ds.labels, w, lam), lam)


def weighted_subspace_fit(ds, w, lam, r):
    """Weighted ridge fit on the projected data ``Z = X r``."""
    w = _check_weights(w, ds.instance_count)
    r = linalg.as_matrix(r, "r")
    if r.shape[0] != ds.feature_count:
        raise ShapeError(f"projection has {r.shape[0]} rows but data has {ds.feature_count} features")
    z = ds.features @ r
    return SubspaceFit(_ridge_solve(z, ds.labels, w, lam), r, lam)


def recover(fits):
    """Average of the subspace solutions mapped back to feature space, ``mean_p R_p b_p``."""
    if not fits:
        raise ValueError("recover needs at least one subspace fit")
    d = fits[0].r.shape[0]
    beta = np.zeros(d)
    for f in fits:
        if f.r.shape[0] != d:
            raise ShapeError(f"subspace fits disagree on d ({f.r.shape[0]} vs {d})")
        beta += f.to_original()
    return LinearClassifier(beta / len(fits), fits[0].lam)


def predict_linear(c, x):
    return float(c.predict(linalg.as_vector(x, "x")))


class StumpSearch:
    """Exhaustive stump search over a fixed feature matrix.

    Column sort orders are computed once so repeated fits under changing
    weights (one per boosting round) only pay for cumulative sums.
    """

    def __init__(self, ds):
        x = ds.features
        self.y = ds.labels
        self.order = np.argsort(x, axis=0, kind="stable")
        self.values = np.take_along_axis(x, self.order, axis=0)
        n = x.shape[0]
        valid = np.ones((n + 1, x.shape[1]), dtype=bool)
        valid[1:n] = self.values[1:] > self.values[:-1]
        self.valid = valid

    def fit(self, w):
        w = _check_weights(w, self.y.shape[0])
        pos_w = np.where(self.y > 0, w, 0.0)[self.order]
        neg_w = np.where(self.y < 0, w, 0.0)[self.order]
        d = self.order.shape[1]
        zero = np.zeros((1, d))
        # mass at or below cut c (c = number of sorted values below the threshold)
        cpos = np.vstack([zero, np.cumsum(pos_w, axis=0)])
        cneg = np.vstack([zero, np.cumsum(neg_w, axis=0)])
        err_plus = cpos + (cneg[-1] - cneg)  # polarity +1: predict +1 above
        err_minus = w.sum() - err_plus
        err = np.stack([err_plus, err_minus], axis=-1)
        err[~self.valid] = np.inf
        # (feature, cut, polarity) order so ties go to the lowest feature/threshold, +1 first
        flat = np.transpose(err, (1, 0, 2)).ravel()
        j, cut, pk = np.unravel_index(int(np.argmin(flat)), (d, err.shape[0], 2))
        v = self.values[:, j]
        if cut == 0:
            thr = -np.inf
        elif cut == v.size:
            thr = np.inf
        else:
            lo, hi = v[cut - 1], v[cut]
            thr = 0.5 * (lo + hi)
            if not lo <= thr < hi:
                thr = lo
        return Stump(int(j), float(thr), 1 if pk == 0 else -1)


def stump_fit(ds, w):
    """Weighted 0/1-error minimising stump.

    Candidates are every feature, both polarities, and thresholds at -inf,
    +inf and the midpoints between consecutive distinct values.
    """
    return StumpSearch(ds).fit(w)


def predict_stump(s, x):
    return float(s.predict(linalg.as_vector(x, "x")))
