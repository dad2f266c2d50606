"""Repeated-split benchmark: learning time and test error per method.

Every run draws one random train/test split from a seed derived from
``(master_seed, run)`` and trains every requested method on that same
split. Runs execute serially so wall-clock timings are not contended.
"""

import csv
import hashlib
import io
import json
import math
import platform
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .boosting import DISPLAY_NAMES, BoostConfig, canonical_method, fit_method
from .data import Dataset, SplitSpec, add_intercept, load_dataset, split, standardize, synth_gaussian
from .errors import DataError, NumericalError, RPBoostError
from .randomness import Rng, derive_seed

__all__ = [
    "SynthSpec",
    "ExperimentSpec",
    "RunRecord",
    "MethodSummary",
    "ExperimentReport",
    "standard_error",
    "run_experiment",
    "summarize",
    "render_report",
    "parse_synth",
    "REPORT_FORMATS",
]

REPORT_FORMATS = ("markdown", "csv", "jsonl")
CSV_HEADER = ("method", "run", "seed", "learn_time_s", "test_error")
TIMING_FIELDS = ("learn_time_s",)


@dataclass(frozen=True)
class SynthSpec:
    n_per_class: int = 36
    d: int = 7129
    informative: int = 10
    shift: float = 1.0
    seed: int = None


def parse_synth(text):
    """Parse ``"d=7129,n=36,informative=10,shift=1.0[,seed=S]"``; ``n`` is per class."""
    keys = {"n": "n_per_class", "n_per_class": "n_per_class", "d": "d",
            "informative": "informative", "shift": "shift", "seed": "seed"}
    kw = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        k, sep, v = item.partition("=")
        k = k.strip().lower()
        if not sep or k not in keys:
            raise ValueError(f"bad synthetic spec item {item!r}")
        name = keys[k]
        kw[name] = float(v) if name == "shift" else int(v)
    return SynthSpec(**kw)


@dataclass(frozen=True)
class ExperimentSpec:
    source: object  # path, SynthSpec or Dataset
    methods: tuple = ("rrc", "rrc-boost", "rpboost")
    repeats: int = 20
    train_fraction: float = 0.8
    boost: BoostConfig = field(default_factory=BoostConfig)
    master_seed: int = 0
    data_format: str = None
    label_column: int = 0
    positive_label: str = "1"
    standardize: bool = False
    stratify: bool = False
    intercept: bool = False
    warmup: bool = True

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if not self.methods:
            raise ValueError("at least one method is required")
        object.__setattr__(self, "methods", tuple(canonical_method(m) for m in self.methods))
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


@dataclass
class RunRecord:
    method: str
    run: int
    seed: int
    learn_time_s: float
    test_error: float
    train_error: float
    rounds: int
    partition_hash: str
    status: str = "ok"
    message: str = ""

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class MethodSummary:
    method: str
    runs: int
    failed: int
    time_mean: float
    time_se: float
    time_sd: float
    error_mean: float
    error_se: float
    error_sd: float


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    records: list
    summaries: dict
    dataset_info: dict
    host: str


def standard_error(samples):
    """Sample standard deviation (n - 1 denominator) over sqrt(n); 0 for one sample."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("standard error of an empty sample")
    if x.size == 1:
        return 0.0
    return float(np.std(x, ddof=1) / math.sqrt(x.size))


def _sd(x):
    return float(np.std(x, ddof=1)) if len(x) > 1 else 0.0


def summarize(records, methods):
    out = {}
    for m in methods:
        rows = [r for r in records if r.method == m]
        ok = [r for r in rows if r.ok]
        t = [r.learn_time_s for r in ok]
        e = [r.test_error for r in ok]
        nan = float("nan")
        out[m] = MethodSummary(
            method=m,
            runs=len(ok),
            failed=len(rows) - len(ok),
            time_mean=float(np.mean(t)) if ok else nan,
            time_se=standard_error(t) if ok else nan,
            time_sd=_sd(t) if ok else nan,
            error_mean=float(np.mean(e)) if ok else nan,
            error_se=standard_error(e) if ok else nan,
            error_sd=_sd(e) if ok else nan,
        )
    return out


def _load_source(spec):
    src = spec.source
    if isinstance(src, Dataset):
        return src
    if isinstance(src, SynthSpec):
        seed = spec.master_seed if src.seed is None else src.seed
        return synth_gaussian(Rng(seed, (0xDA7A,)), src.n_per_class, src.d, src.informative, src.shift)
    return load_dataset(src, spec.data_format, spec.label_column, spec.positive_label)


def _partition_hash(train_idx, test_idx):
    h = hashlib.sha256()
    h.update(np.asarray(train_idx, dtype=np.int64).tobytes())
    h.update(b"|")
    h.update(np.asarray(test_idx, dtype=np.int64).tobytes())
    return h.hexdigest()[:16]


def _host_note():
    return f"{platform.platform()}; {platform.processor() or platform.machine()}; python {platform.python_version()}"


def run_experiment(spec, progress=None):
    """Run the protocol described by ``spec`` and return an ExperimentReport.

    A failing (method, run) cell is recorded with status "failed" and the
    remaining cells still run. ``progress``, if given, is called with each
    finished RunRecord.
    """
    ds = _load_source(spec)
    info = {
        "instances": ds.instance_count,
        "features": ds.feature_count,
        "positive": ds.class_counts()[0],
        "negative": ds.class_counts()[1],
    }
    records = []
    warmed = set()
    for run in range(spec.repeats):
        run_seed = derive_seed(spec.master_seed, run)
        train, test, tr_idx, te_idx = split(ds, SplitSpec(spec.train_fraction, run_seed, spec.stratify))
        if spec.standardize:
            train, test, _ = standardize(train, test)
        if spec.intercept:
            train, test = add_intercept(train), add_intercept(test)
        phash = _partition_hash(tr_idx, te_idx)
        cfg = replace(spec.boost, seed=run_seed)

        for method in spec.methods:
            if spec.warmup and method not in warmed:
                warmed.add(method)
                try:
                    fit_method(method, train, replace(cfg, rounds=1), Rng(run_seed).child(1))
                except (RPBoostError, ValueError):
                    pass
            try:
                t0 = time.perf_counter()
                model, trace = fit_method(method, train, cfg, Rng(run_seed).child(1))
                elapsed = time.perf_counter() - t0
                rec = RunRecord(
                    method=method,
                    run=run,
                    seed=run_seed,
                    learn_time_s=elapsed,
                    test_error=float(np.mean(model.predict(test.features) != test.labels)),
                    train_error=float(np.mean(model.predict(train.features) != train.labels)),
                    rounds=len(model.members),
                    partition_hash=phash,
                )
            except (NumericalError, DataError, ValueError) as exc:
                rec = RunRecord(method, run, run_seed, float("nan"), float("nan"), float("nan"),
                                0, phash, status="failed", message=str(exc))
            records.append(rec)
            if progress is not None:
                progress(rec)

    return ExperimentReport(spec, records, summarize(records, spec.methods), info, _host_note())


def _pm(mean, se):
    return f"{mean:.2f}±{se:.2f}"


def _render_markdown(rep):
    spec = rep.spec
    lines = [
        "| method | learn time (s) | generalisation error |",
        "|---|---|---|",
    ]
    notes = []
    for m in spec.methods:
        s = rep.summaries[m]
        name = DISPLAY_NAMES[m]
        if s.runs == 0:
            lines.append(f"| {name} | — | — |")
            notes.append(f"— {name}: all {s.failed} runs failed.")
            continue
        mark = ""
        if s.failed:
            mark = "†" * (len(notes) + 1)
            notes.append(f"{mark} {name}: {s.failed} of {s.failed + s.runs} runs failed; statistics over the rest.")
        lines.append(f"| {name}{mark} | {_pm(s.time_mean, s.time_se)} | {_pm(s.error_mean, s.error_se)} |")
    cfg = spec.boost
    info = rep.dataset_info
    lines.append("")
    lines.append(
        f"N={info['instances']} (+{info['positive']}/-{info['negative']}), d={info['features']}; "
        f"{spec.repeats} runs, {spec.train_fraction:g}/{1 - spec.train_fraction:.2g} split; "
        f"K={cfg.rounds}, P={cfg.projections}, m={cfg.subspace_dim}, lambda={cfg.lam:g}; "
        f"seed={spec.master_seed}; mean±standard error."
    )
    lines.extend(notes)
    lines.append(f"host: {rep.host}")
    return "\n".join(lines) + "\n"


def _num(v):
    return "" if v is None or (isinstance(v, float) and math.isnan(v)) else repr(v)


def _render_csv(rep):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rep.records:
        w.writerow([r.method, r.run, r.seed, _num(r.learn_time_s), _num(r.test_error)])
    return buf.getvalue()


def _render_jsonl(rep):
    out = []
    for r in rep.records:
        d = asdict(r)
        for k, v in d.items():
            if isinstance(v, float) and math.isnan(v):
                d[k] = None
        out.append(json.dumps(d, sort_keys=True))
    return "\n".join(out) + "\n"


def render_report(rep, fmt="markdown"):
    """Render as ``markdown`` (summary table), ``csv`` or ``jsonl`` (raw per-run records)."""
    if fmt in ("markdown", "md", "markdown-table"):
        return _render_markdown(rep)
    if fmt == "csv":
        return _render_csv(rep)
    if fmt in ("jsonl", "json-lines"):
        return _render_jsonl(rep)
    raise ValueError(f"unknown report format {fmt!r}; choose from {', '.join(REPORT_FORMATS)}")
