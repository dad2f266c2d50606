"""End-to-end acceptance checks.

Each test records a one-line verdict in ``ACCEPTANCE_RESULTS``; the
terminal summary prints them as ``[PASS|FAIL] criterion N: ...``.
Set ``RPBOOST_FULL_ACCEPTANCE=1`` to run the timing check with the full
300 rounds instead of the 30-round CI mode.
"""

import json
import os
import time

import numpy as np

from rpboost import cli
from rpboost.bench import ExperimentSpec, SynthSpec, run_experiment
from rpboost.boosting import BoostConfig, fit_method, train_rpboost, train_rrcboost, train_stumpboost
from rpboost.data import Dataset, synth_gaussian
from rpboost.learners import ridge_fit, stump_fit, weighted_ridge_fit, weighted_subspace_fit
from rpboost.randomness import Rng, projection_matrix

from helpers import ACCEPTANCE_RESULTS, random_dataset
from oracles import brute_force_stump_error, naive_matmul, stump_error, weighted_ridge_by_inverse

FULL = os.environ.get("RPBOOST_FULL_ACCEPTANCE") == "1"


def _verdict(num, ok, detail):
    ACCEPTANCE_RESULTS[num] = (bool(ok), detail)
    assert ok, f"criterion {num}: {detail}"


def _stationarity(x, y, w, lam, beta):
    """Relative gradient residual of the weighted ridge objective."""
    res = np.max(np.abs(x.T @ (w * (x @ beta - y)) + lam * beta))
    return res / (1.0 + np.max(np.abs(x.T @ (w * y))))


def test_criterion_1_normal_equations_and_inverse_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    lam = 0.3
    worst_res, worst_oracle, oracle_cases = 0.0, 0.0, 0
    for _ in range(100):
        n, d, m = int(rng.integers(10, 51)), int(rng.integers(5, 101)), int(rng.integers(1, 11))
        ds = random_dataset(rng, n, d)
        x, y = ds.features, ds.labels
        w = rng.random(n) + 0.01
        r = rng.normal(size=(d, m)) / np.sqrt(d)
        z = x @ r

        beta_full = ridge_fit(ds, lam).beta
        beta_w = weighted_ridge_fit(ds, w, lam).beta
        b_sub = weighted_subspace_fit(ds, w, lam, r).b
        worst_res = max(
            worst_res,
            _stationarity(x, y, np.ones(n), lam, beta_full),
            _stationarity(x, y, w, lam, beta_w),
            _stationarity(z, y, w, lam, b_sub),
        )

        if d <= 20:
            oracle_cases += 1
            xl, yl, wl = x.tolist(), y.tolist(), w.tolist()
            zl = naive_matmul(xl, r.tolist())
            refs = [
                (beta_full, weighted_ridge_by_inverse(xl, yl, [1.0] * n, lam)),
                (beta_w, weighted_ridge_by_inverse(xl, yl, wl, lam)),
                (b_sub, weighted_ridge_by_inverse(zl, yl, wl, lam)),
            ]
            for got, ref in refs:
                worst_oracle = max(worst_oracle, float(np.max(np.abs(got - np.array(ref)))))
    elapsed = time.perf_counter() - t0
    ok = worst_res <= 1e-7 and worst_oracle <= 1e-8 and oracle_cases > 0 and elapsed < 10
    _verdict(1, ok, f"max residual {worst_res:.1e} (<=1e-7), max oracle diff {worst_oracle:.1e} "
                    f"(<=1e-8) on {oracle_cases} d<=20 cases, {elapsed:.1f}s (<10s)")


def test_criterion_2_identity_projection_reproduces_rrc_boost():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst_eps, worst_alpha, lengths_match = 0.0, 0.0, True
    for _ in range(10):
        n, d = int(rng.integers(20, 41)), int(rng.integers(2, 11))
        ds = random_dataset(rng, n, d)
        cfg = BoostConfig(rounds=25, projections=1, subspace_dim=d)
        _, rp = train_rpboost(ds, cfg, Rng(0), projection_fn=lambda k, p, dd, mm: np.eye(dd))
        _, rr = train_rrcboost(ds, cfg)
        if len(rp) != len(rr):
            lengths_match = False
            continue
        worst_eps = max(worst_eps, float(np.max(np.abs(rp.column("epsilon") - rr.column("epsilon")))))
        worst_alpha = max(worst_alpha, float(np.max(np.abs(rp.column("alpha") - rr.column("alpha")))))
    elapsed = time.perf_counter() - t0
    ok = lengths_match and worst_eps <= 1e-9 and worst_alpha <= 1e-9 and elapsed < 10
    _verdict(2, ok, f"max |d eps| {worst_eps:.1e}, max |d alpha| {worst_alpha:.1e} (<=1e-9), "
                    f"same round counts {lengths_match}, {elapsed:.1f}s (<10s)")


def test_criterion_3_adaboost_invariants():
    t0 = time.perf_counter()
    worst_sum, worst_mass, loss_violations, monotone_runs = 0.0, 0.0, 0, 0
    for seed in range(50):
        ds = synth_gaussian(Rng(seed), 20, 15, 3, 0.5)
        cfg = BoostConfig(rounds=40, seed=seed)
        for _, trace in (train_stumpboost(ds, cfg), train_rpboost(ds, cfg, Rng(seed))):
            eps = trace.column("epsilon")
            worst_sum = max(worst_sum, float(np.max(np.abs(trace.column("weight_sum") - 1.0))))
            unclamped = (eps > cfg.epsilon_clamp) & (eps < 1 - cfg.epsilon_clamp)
            if unclamped.any():
                mass = trace.column("misclassified_mass")[unclamped]
                worst_mass = max(worst_mass, float(np.max(np.abs(mass - 0.5))))
            if np.all(eps <= 0.5):
                monotone_runs += 1
                loss = trace.column("loss")
                # relative slack of a few ulps for rounds with eps == 0.5 exactly
                if np.any(np.diff(loss) > 4 * np.finfo(float).eps * loss[:-1]):
                    loss_violations += 1
    elapsed = time.perf_counter() - t0
    ok = worst_sum <= 1e-12 and worst_mass <= 1e-9 and loss_violations == 0 and elapsed < 60
    _verdict(3, ok, f"max |sum w - 1| {worst_sum:.1e} (<=1e-12), max |mass - 0.5| {worst_mass:.1e} "
                    f"(<=1e-9), loss increases in {loss_violations} of {monotone_runs} runs, {elapsed:.1f}s (<60s)")


def _timed(method, ds, cfg, repeat=1):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fit_method(method, ds, cfg, Rng(cfg.seed))
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_4_speed_pattern():
    rounds = 300 if FULL else 30
    ds = synth_gaussian(Rng(0), 36, 7129, 10, 1.0)
    # fixed round budget: the full-space learner separates the data in round one
    cfg = BoostConfig(rounds=rounds, projections=3, subspace_dim=3, lam=0.3, stop_on_perfect=False)
    warm = BoostConfig(rounds=1, stop_on_perfect=False)
    for method in ("rpboost", "rrc-boost", "rrc"):
        fit_method(method, ds, warm, Rng(0))
    t_rp = _timed("rpboost", ds, cfg, repeat=3)
    t_rrc = _timed("rrc", ds, cfg, repeat=3)
    t_boost = _timed("rrc-boost", ds, cfg)
    ratio = t_boost / t_rp
    ok = ratio >= 50 and t_rp < t_rrc
    _verdict(4, ok, f"K={rounds}: rpBoost {t_rp:.2f}s, RRC-Boost {t_boost:.1f}s (ratio {ratio:.0f}x, need >=50x), "
                    f"single RRC {t_rrc:.2f}s (rpBoost faster: {t_rp < t_rrc})")


def test_criterion_5_generalisation_pattern():
    spec = ExperimentSpec(
        SynthSpec(n_per_class=31, d=2000, informative=10, shift=1.0),
        methods=("rpboost", "rrc-boost"),
        repeats=20,
        train_fraction=0.8,
        master_seed=0,
        warmup=False,
    )
    rep = run_experiment(spec)
    rp, rr = rep.summaries["rpboost"], rep.summaries["rrc-boost"]
    gap = abs(rp.error_mean - rr.error_mean)
    ok = gap <= 0.05 and rp.failed == 0 and rr.failed == 0
    _verdict(5, ok, f"rpBoost {rp.error_mean:.3f}+-{rp.error_se:.3f} vs RRC-Boost {rr.error_mean:.3f}+-{rr.error_se:.3f}, "
                    f"gap {gap:.3f} (need <=0.05)")


def _records_without_timing(path):
    rows = []
    for line in path.read_text().splitlines():
        rec = json.loads(line)
        rec.pop("learn_time_s")
        rows.append(rec)
    return rows


def test_criterion_6_bench_determinism(tmp_path):
    t0 = time.perf_counter()
    outs = []
    for name in ("a", "b"):
        jl, cs = tmp_path / f"{name}.jsonl", tmp_path / f"{name}.csv"
        rc = cli.main([
            "bench", "--synth", "d=300,n=20,informative=10", "--methods", "rrc,rrc-boost,rpboost,rprrc,stump-boost",
            "--repeats", "3", "-K", "20", "--seed", "42", "--out-jsonl", str(jl), "--out-csv", str(cs),
            "--report-format", "csv",
        ])
        assert rc == 0
        csv_rows = [line.split(",") for line in cs.read_text().splitlines()]
        csv_rows = [row[:3] + row[4:] for row in csv_rows]  # drop learn_time_s
        outs.append((_records_without_timing(jl), csv_rows))
    elapsed = time.perf_counter() - t0
    same = outs[0] == outs[1]
    ok = same and len(outs[0][0]) == 15 and elapsed < 120
    _verdict(6, ok, f"raw records identical modulo timing: {same} ({len(outs[0][0])} records), {elapsed:.1f}s (<120s)")


def test_criterion_7_stump_optimality():
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(200):
        n, d = int(rng.integers(2, 13)), int(rng.integers(1, 5))
        # a mix of continuous and heavily tied columns
        x = rng.normal(size=(n, d)) if rng.random() < 0.5 else rng.integers(0, 3, size=(n, d)).astype(float)
        y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        w = rng.random(n)
        w /= w.sum()
        s = stump_fit(Dataset(x, y), w)
        xl, yl, wl = x.tolist(), y.tolist(), w.tolist()
        got = stump_error(xl, yl, wl, s.feature, s.threshold, s.polarity)
        worst = max(worst, got - brute_force_stump_error(xl, yl, wl))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10
    _verdict(7, ok, f"max excess over brute-force optimum {worst:.1e} on 200 instances, {elapsed:.1f}s (<10s)")


def test_criterion_8_projection_statistics():
    t0 = time.perf_counter()
    base = Rng(8)
    lines, ok = [], True
    for d, m in ((50, 3), (500, 10), (7129, 3)):
        x = np.random.default_rng(d).normal(size=d)
        norms, entries = [], []
        for i in range(200):
            r = projection_matrix(base.child(d, i), d, m)
            norms.append(float(np.sum((r.T @ x) ** 2)))
            entries.append(r.ravel())
        var = float(np.var(np.concatenate(entries)))
        norms = np.array(norms)
        target = m / d * float(x @ x)
        se = norms.std(ddof=1) / np.sqrt(len(norms))
        var_ok = abs(var * d - 1.0) <= 0.2
        norm_ok = abs(norms.mean() - target) <= 3 * se
        ok = ok and var_ok and norm_ok
        lines.append(f"d={d},m={m}: var*d={var * d:.3f}, |mean-target|/SE={abs(norms.mean() - target) / se:.2f}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5
    _verdict(8, ok, "; ".join(lines) + f"; {elapsed:.1f}s (<5s)")
