"""Command line: ``rpboost {train,predict,bench,synth}``.

Exit codes: 0 success, 1 usage or validation error, 2 data error,
3 numerical failure.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import modelio
from .bench import REPORT_FORMATS, ExperimentSpec, parse_synth, render_report, run_experiment
from .boosting import METHODS, BoostConfig, canonical_method, fit_method
from .data import add_intercept, describe, load_csv, load_dataset, load_libsvm, synth_gaussian, write_csv
from .data import standardize as standardize_ds
from .errors import DataError, NumericalError, ShapeError
from .randomness import Rng

log = logging.getLogger("rpboost")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
SEED_ENV = "RPBOOST_SEED"

# name -> (type, default); the defaults are the experimental settings K=300, P=3, m=3, lambda=0.3
DEFAULTS = {
    "rounds": (int, 300),
    "projections": (int, 3),
    "subspace_dim": (int, 3),
    "lam": (float, 0.3),
    "clamp": (float, 1e-10),
    "train_fraction": (float, 0.8),
    "repeats": (int, 20),
    "seed": (int, 0),
    "methods": (str, "rrc,rrc-boost,rpboost"),
    "method": (str, None),
    "data": (str, None),
    "format": (str, None),
    "synth": (str, None),
    "label_column": (int, 0),
    "positive_label": (str, "1"),
    "standardize": (bool, False),
    "stratify": (bool, False),
    "intercept": (bool, False),
    "no_early_stop": (bool, False),
    "no_warmup": (bool, False),
}
_CONFIG_ALIASES = {"lambda": "lam", "k": "rounds", "p": "projections", "m": "subspace_dim"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key = key.strip().lower().replace("-", "_")
            key = _CONFIG_ALIASES.get(key, key)
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            cfg[key] = value.strip()
    return cfg


def _coerce(kind, value):
    if kind is bool and isinstance(value, str):
        v = value.lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"bad boolean {value!r}")
    try:
        return kind(value)
    except ValueError:
        raise UsageError(f"bad value {value!r}") from None


def resolve(args):
    """Merge flags over config file over defaults (seed also honours $RPBOOST_SEED)."""
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for name, (kind, default) in DEFAULTS.items():
        flag = getattr(args, name, None)
        if kind is bool:
            flag = True if flag else None
        if flag is not None:
            out[name] = flag
        elif name in file_cfg:
            out[name] = _coerce(kind, file_cfg[name])
        elif name == "seed" and os.environ.get(SEED_ENV):
            out[name] = _coerce(int, os.environ[SEED_ENV])
        else:
            out[name] = default
    return out


def _boost_config(opts):
    return BoostConfig(
        rounds=opts["rounds"],
        projections=opts["projections"],
        subspace_dim=opts["subspace_dim"],
        lam=opts["lam"],
        epsilon_clamp=opts["clamp"],
        seed=opts["seed"],
        stop_on_perfect=not opts["no_early_stop"],
    )


def _add_data_flags(p):
    p.add_argument("--data", help="dataset file (CSV or LIBSVM text)")
    p.add_argument("--format", choices=("csv", "libsvm"), help="data format (default: by extension, else csv)")
    p.add_argument("--label-column", dest="label_column", type=int, help="CSV label column index (default 0)")
    p.add_argument("--positive-label", dest="positive_label", help="CSV label token mapped to +1 (default '1')")


def _add_boost_flags(p):
    p.add_argument("-K", "--rounds", type=int, help="boosting rounds K; also L for rprrc (default 300)")
    p.add_argument("-P", "--projections", type=int, help="random projections per round P (default 3)")
    p.add_argument("-m", "--subspace-dim", dest="subspace_dim", type=int, help="subspace dimension m (default 3)")
    p.add_argument("--lambda", dest="lam", type=float, help="ridge parameter lambda (default 0.3)")
    p.add_argument("--clamp", type=float, help="weighted-error clamp before the log (default 1e-10)")
    p.add_argument("--no-early-stop", dest="no_early_stop", action="store_true",
                   help="keep boosting after a round with zero weighted error (default: stop)")
    p.add_argument("--seed", type=int, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--intercept", action="store_true", help="append a constant-1 feature (default off)")
    p.add_argument("--standardize", action="store_true",
                   help="scale features by training statistics (default off)")


def build_parser():
    parser = _Parser(prog="rpboost", description="Boosted random-subspace ridge regression classifiers.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("train", help="train one method on a whole file and write the model")
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--method", help=f"one of {', '.join(METHODS)}")
    _add_data_flags(p)
    _add_boost_flags(p)
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("--trace", help="per-round trace CSV (default: <out>.trace.csv)")

    p = sub.add_parser("predict", help="label rows of a file with a trained model")
    p.add_argument("--model", required=True, help="model file written by train")
    _add_data_flags(p)
    p.add_argument("--unlabeled", action="store_true", help="CSV has no label column")
    p.add_argument("--out", help="write labels here instead of stdout")

    p = sub.add_parser("bench", help="repeated train/test splits, timing and error per method")
    p.add_argument("--config", help="key = value experiment file; flags override it")
    _add_data_flags(p)
    p.add_argument("--synth", help="synthetic source, e.g. d=7129,n=36,informative=10[,shift=1.0]")
    p.add_argument("--methods", help="comma list from: " + ", ".join(METHODS) + " (default rrc,rrc-boost,rpboost)")
    p.add_argument("--repeats", type=int, help="independent runs (default 20)")
    p.add_argument("--train-fraction", dest="train_fraction", type=float, help="training share (default 0.8)")
    _add_boost_flags(p)
    p.add_argument("--stratify", action="store_true", help="stratify splits by class (default off)")
    p.add_argument("--no-warmup", dest="no_warmup", action="store_true", help="skip the untimed warm-up fit")
    p.add_argument("--report-format", dest="report_format", choices=REPORT_FORMATS, default="markdown",
                   help="format printed to stdout (default markdown)")
    p.add_argument("--out-md", help="also write the markdown table here")
    p.add_argument("--out-csv", help="also write raw records as CSV here")
    p.add_argument("--out-jsonl", help="also write raw records as JSON lines here")

    p = sub.add_parser("synth", help="write a two-Gaussian synthetic dataset as CSV")
    p.add_argument("--n-per-class", dest="n_per_class", type=int, default=36, help="instances per class (default 36)")
    p.add_argument("--d", type=int, default=7129, help="feature count (default 7129)")
    p.add_argument("--informative", type=int, default=10, help="shifted features (default 10)")
    p.add_argument("--shift", type=float, default=1.0, help="class mean offset (default 1.0)")
    p.add_argument("--seed", type=int, help=f"seed (default ${SEED_ENV} or 0)")
    p.add_argument("--out", required=True, help="CSV output path")
    return parser


def _load(opts):
    if not opts["data"]:
        raise UsageError("--data is required")
    return load_dataset(opts["data"], opts["format"], opts["label_column"], opts["positive_label"])


def cmd_train(args):
    opts = resolve(args)
    if not opts["method"]:
        raise UsageError("--method is required")
    method = canonical_method(opts["method"])
    ds = _load(opts)
    log.info("dataset: %s", describe(ds))
    raw_d = ds.feature_count
    mean = scale = None
    if opts["standardize"]:
        ds, (mean, scale) = standardize_ds(ds)
    if opts["intercept"]:
        ds = add_intercept(ds)
    cfg = _boost_config(opts)
    ensemble, trace = fit_method(method, ds, cfg, Rng(cfg.seed))
    model = modelio.TrainedModel(ensemble, raw_d, opts["intercept"], mean, scale)
    modelio.save(model, args.out)
    if trace is not None:
        with open(args.trace or args.out + ".trace.csv", "w", encoding="utf-8") as fh:
            fh.write(trace.to_csv())
    err = float(np.mean(ensemble.predict(ds.features) != ds.labels))
    log.info("%s: %d members, training error %.4f", method, len(ensemble.members), err)
    return EXIT_OK


def cmd_predict(args):
    model = modelio.load(args.model)
    if not args.data:
        raise UsageError("--data is required")
    fmt = args.format
    if fmt is None and os.path.splitext(args.data)[1].lower() in (".libsvm", ".svm", ".svmlight"):
        fmt = "libsvm"
    labeled = not args.unlabeled
    if fmt == "libsvm":
        ds = load_libsvm(args.data, n_features=model.n_features)
    else:
        ds = load_csv(
            args.data,
            label_column=0 if args.label_column is None else args.label_column,
            positive_label="1" if args.positive_label is None else args.positive_label,
            labeled=labeled,
            require_both_classes=False,
        )
    if ds.feature_count != model.n_features:
        raise ShapeError(f"model expects d={model.n_features} features, found d={ds.feature_count}")
    pred = model.predict(ds.features)
    text = "".join("1\n" if p > 0 else "-1\n" for p in pred)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if labeled:
        wrong = int(np.sum(pred != ds.labels))
        print(f"0/1 error: {wrong / len(pred):.2f} ({wrong} of {len(pred)} misclassified)",
              file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_bench(args):
    opts = resolve(args)
    if opts["data"] and opts["synth"]:
        raise UsageError("give either --data or --synth, not both")
    if opts["synth"]:
        source = parse_synth(opts["synth"])
    elif opts["data"]:
        source = opts["data"]
    else:
        raise UsageError("one of --data or --synth is required")
    spec = ExperimentSpec(
        source=source,
        methods=tuple(m for m in opts["methods"].split(",") if m.strip()),
        repeats=opts["repeats"],
        train_fraction=opts["train_fraction"],
        boost=_boost_config(opts),
        master_seed=opts["seed"],
        data_format=opts["format"],
        label_column=opts["label_column"],
        positive_label=opts["positive_label"],
        standardize=opts["standardize"],
        stratify=opts["stratify"],
        intercept=opts["intercept"],
        warmup=not opts["no_warmup"],
    )
    rep = run_experiment(
        spec, progress=lambda r: log.info("run %d %s: %s", r.run, r.method, r.status if not r.ok else f"{r.test_error:.3f}")
    )
    log.info("dataset: %s", rep.dataset_info)
    for path, fmt in ((args.out_md, "markdown"), (args.out_csv, "csv"), (args.out_jsonl, "jsonl")):
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(render_report(rep, fmt))
    sys.stdout.write(render_report(rep, args.report_format))
    return EXIT_OK


def cmd_synth(args):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV) or 0)
    ds = synth_gaussian(Rng(seed), args.n_per_class, args.d, args.informative, args.shift)
    write_csv(ds, args.out)
    return EXIT_OK


COMMANDS = {"train": cmd_train, "predict": cmd_predict, "bench": cmd_bench, "synth": cmd_synth}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rpboost: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ShapeError, OSError) as exc:
        print(f"rpboost: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"rpboost: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"rpboost: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
