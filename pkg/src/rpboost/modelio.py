"""Plain-text model files.

Layout::

    rpboost-model 1 method=rpboost K=300 lambda=0.3 m=3 P=3 seed=42 d=7129 clamp=1e-10 intercept=0 members=300
    [mean <d values>]
    [scale <d values>]
    <alpha> <coef_1> ... <coef_D>                      (linear member)
    <alpha> stump <feature> <threshold> <polarity>     (stump member)

Floats are written with ``repr`` so a write/read cycle is bit-exact. ``d``
is the raw input width; linear members carry ``d + intercept`` coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .boosting import BoostConfig, Ensemble, canonical_method
from .errors import ModelFormatError, ShapeError
from .learners import LinearClassifier, Stump

MAGIC = "rpboost-model"
VERSION = 1


@dataclass(eq=False)
class TrainedModel:
    """Ensemble plus the input preprocessing it was trained behind."""

    ensemble: Ensemble
    n_features: int
    intercept: bool = False
    mean: np.ndarray = None
    scale: np.ndarray = None

    def transform(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != self.n_features:
            raise ShapeError(f"model expects d={self.n_features} features, input has {x.shape[1]}")
        if self.mean is not None:
            x = (x - self.mean) / self.scale
        if self.intercept:
            x = np.hstack([x, np.ones((x.shape[0], 1))])
        return x

    def predict(self, x):
        return self.ensemble.predict(self.transform(x))


def _fmt(v):
    return repr(float(v))


def dumps(model):
    e = model.ensemble
    cfg = e.config
    header = [
        MAGIC,
        str(VERSION),
        f"method={e.method}",
        f"K={cfg.rounds}",
        f"lambda={_fmt(cfg.lam)}",
        f"m={cfg.subspace_dim}",
        f"P={cfg.projections}",
        f"seed={cfg.seed}",
        f"d={model.n_features}",
        f"clamp={_fmt(cfg.epsilon_clamp)}",
        f"intercept={int(model.intercept)}",
        f"members={len(e.members)}",
    ]
    lines = [" ".join(header)]
    if model.mean is not None:
        lines.append("mean " + " ".join(_fmt(v) for v in model.mean))
        lines.append("scale " + " ".join(_fmt(v) for v in model.scale))
    for alpha, h in e.members:
        if isinstance(h, Stump):
            lines.append(f"{_fmt(alpha)} stump {h.feature} {_fmt(h.threshold)} {h.polarity}")
        else:
            lines.append(_fmt(alpha) + " " + " ".join(_fmt(v) for v in h.beta))
    return "\n".join(lines) + "\n"


def _float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ModelFormatError(f"line {lineno}: bad number {tok!r}") from None


def loads(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ModelFormatError("empty model file")
    head = lines[0].split()
    if len(head) < 2 or head[0] != MAGIC:
        raise ModelFormatError("not an rpboost model file")
    if head[1] != str(VERSION):
        raise ModelFormatError(f"unsupported model format version {head[1]}")
    try:
        kv = dict(item.split("=", 1) for item in head[2:])
        method = canonical_method(kv["method"])
        cfg = BoostConfig(
            rounds=int(kv["K"]),
            projections=int(kv["P"]),
            subspace_dim=int(kv["m"]),
            lam=float(kv["lambda"]),
            epsilon_clamp=float(kv["clamp"]),
            seed=int(kv["seed"]),
        )
        d = int(kv["d"])
        intercept = bool(int(kv["intercept"]))
        n_members = int(kv["members"])
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"bad model header: {exc}") from exc

    body = lines[1:]
    mean = scale = None
    if body and body[0].startswith("mean "):
        if len(body) < 2 or not body[1].startswith("scale "):
            raise ModelFormatError("'mean' line without matching 'scale' line")
        mean = np.array([_float(t, 2) for t in body[0].split()[1:]])
        scale = np.array([_float(t, 3) for t in body[1].split()[1:]])
        if mean.shape[0] != d or scale.shape[0] != d:
            raise ModelFormatError(f"preprocessing vectors must have length {d}")
        body = body[2:]

    width = d + int(intercept)
    members = []
    for offset, line in enumerate(body):
        lineno = len(lines) - len(body) + offset + 1
        tok = line.split()
        alpha = _float(tok[0], lineno)
        if len(tok) > 1 and tok[1] == "stump":
            if len(tok) != 5:
                raise ModelFormatError(f"line {lineno}: stump needs feature, threshold, polarity")
            s = Stump(int(tok[2]), _float(tok[3], lineno), int(tok[4]))
            if not 0 <= s.feature < width or s.polarity not in (-1, 1):
                raise ModelFormatError(f"line {lineno}: invalid stump {tok[2:]}")
            members.append((alpha, s))
        else:
            beta = np.array([_float(t, lineno) for t in tok[1:]])
            if beta.shape[0] != width:
                raise ModelFormatError(f"line {lineno}: expected {width} coefficients, found {beta.shape[0]}")
            members.append((alpha, LinearClassifier(beta, cfg.lam)))
    if len(members) != n_members:
        raise ModelFormatError(f"header declares {n_members} members, found {len(members)}")
    return TrainedModel(Ensemble(members, method, cfg), d, intercept, mean, scale)


def save(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
