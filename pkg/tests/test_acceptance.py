"""Acceptance suite. Each criterion prints one PASS/FAIL line and asserts at its stated tolerance.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear even without ``-s``.
"""

import math
import time

import mpmath
import numpy as np
import pytest
from scipy.stats import spearmanr

from nedclass.bounds import (
    bound_corollary1,
    bound_theorem1,
    epsilon_from_distributions,
    epsilon_theorem1,
    mean_distributions,
)
from nedclass.core import Alphabet, SourceModel, TrainingSet, default_labels
from nedclass.datagen import gen_iid_model, gen_nonoverlapping_model, gen_overlapping_model
from nedclass.harness import ExperimentConfig, run_experiment, simulate
from nedclass.ned import classify, empirical, minkowski
from nedclass.oracle import exact_error_oracle

pytestmark = pytest.mark.slow

CLASSIFIERS = ("ned", "nb", "knn")


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {number}: {detail}"


def by_n(rows, clf):
    return {r.n: r.error_estimate for r in rows if r.classifier == clf}


def test_criterion_1_oracle_equivalence(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(20240101)
    worst, failures = 0.0, []
    for inst in range(20):
        n = 1 + inst % 4
        model = SourceModel(Alphabet([0, 1]), default_labels(2), rng.dirichlet(np.ones(2), size=(n, 2)))
        sim = simulate(model, t=1, r=2.0, reps=1000, tests_per_label=50, seed=inst)
        assert sim.errors["ned"].size * sim.trials_per_rep >= 10**5
        for clf in CLASSIFIERS:
            exact = exact_error_oracle(model, 1, 2.0, clf)
            se = sim.rep_stderr(clf)
            z = abs(sim.mean(clf) - exact) / se if se > 0 else (0.0 if sim.mean(clf) == exact else math.inf)
            worst = max(worst, z)
            if z > 3:
                failures.append((inst, clf, z))
    elapsed = time.perf_counter() - start
    report(capsys, 1, not failures, f"20 instances x 3 classifiers, worst |z| = {worst:.2f}, {elapsed:.0f}s, failures {failures}")


def test_criterion_2_bound_soundness(capsys):
    start = time.perf_counter()
    checked, violations = 0, []
    for inst in range(50):
        size = 2 + inst % 5
        t = 1 if inst % 2 == 0 else 10
        model = gen_iid_model(size, 2, 50, np.random.default_rng([2024, inst]))
        sim = simulate(model, t=t, r=2.0, reps=200, tests_per_label=100, seed=inst, classifiers=("ned",))
        bound = float(sim.thm1_bounds.mean())
        if bound > 1:
            continue
        checked += 1
        if sim.mean("ned") > bound + 3 * sim.rep_stderr("ned"):
            violations.append((inst, sim.mean("ned"), bound))
    elapsed = time.perf_counter() - start
    report(capsys, 2, not violations, f"{checked} of 50 instances with bound <= 1, violations {violations}, {elapsed:.0f}s")


def test_criterion_3_iid_trend(capsys):
    start = time.perf_counter()
    cfg = ExperimentConfig(
        family="iid", n_grid=[1, *range(5, 101, 5)], t=1, alphabet_size=6, num_labels=2,
        reps=500, tests_per_label=200, seed=0, model_scope="per-rep",
    )
    rows = run_experiment(cfg)
    ned, nb, knn = (by_n(rows, c) for c in CLASSIFIERS)
    rho = spearmanr(list(ned), list(ned.values())).statistic
    ok = ned[100] < nb[100] and ned[100] < knn[100] and rho < -0.9
    elapsed = time.perf_counter() - start
    report(capsys, 3, ok, f"n=100 ned {ned[100]:.4f} nb {nb[100]:.4f} knn {knn[100]:.4f}, spearman {rho:.3f}, {elapsed:.0f}s")


def test_criterion_4_overlap_t1(capsys):
    start = time.perf_counter()
    cfg = ExperimentConfig(family="overlap", n_grid=list(range(10, 101)), t=1, reps=200, tests_per_label=200, seed=0)
    rows = run_experiment(cfg)
    ned, nb, knn = (by_n(rows, c) for c in CLASSIFIERS)
    nb_lo, nb_hi = min(nb.values()), max(nb.values())
    knn_lo = min(v for n, v in knn.items() if n > 20)
    gap = min(nb[100], knn[100]) - ned[100]
    ok = 0.40 <= nb_lo and nb_hi <= 0.55 and knn_lo >= 0.40 and gap > 0.1
    elapsed = time.perf_counter() - start
    report(capsys, 4, ok, f"nb in [{nb_lo:.4f}, {nb_hi:.4f}], knn min (n>20) {knn_lo:.4f}, ned margin at n=100 {gap:.4f}, {elapsed:.0f}s")


def test_criterion_5_overlap_t100(capsys):
    start = time.perf_counter()
    cfg = ExperimentConfig(
        family="overlap", n_grid=list(range(20, 101)), t=100, reps=100, tests_per_label=200,
        seed=0, classifiers=["ned", "nb"],
    )
    rows = run_experiment(cfg)
    ned, nb = by_n(rows, "ned"), by_n(rows, "nb")
    losing = [n for n in ned if not ned[n] < nb[n]]
    elapsed = time.perf_counter() - start
    detail = f"ned >= nb at {len(losing)} of {len(ned)} n values"
    if losing:
        worst = max(losing, key=lambda n: ned[n] - nb[n])
        detail += f" (worst n={worst}: ned {ned[worst]:.4f} nb {nb[worst]:.4f})"
    report(capsys, 5, not losing, f"{detail}, {elapsed:.0f}s")


def test_criterion_6_bound_limit(capsys):
    model = SourceModel(Alphabet([0, 1]), default_labels(2), np.tile([[0.9, 0.1], [0.1, 0.9]], (10, 1, 1)))
    means = mean_distributions(model)
    r, t = 2.0, 10**6
    thm = bound_theorem1(epsilon_from_distributions(means, means, r, t), model.n, t, len(model.alphabet))
    cor = bound_corollary1(model, r).bound
    rel = abs(thm - cor) / cor
    report(capsys, 6, rel <= 1e-3, f"theorem-1 {thm!r} vs corollary-1 {cor!r}, relative gap {rel:.4e}")


def test_criterion_7_closed_forms(capsys):
    mpmath.mp.dps = 50
    want_bound = 8 * mpmath.e ** -2
    got_bound = bound_theorem1(1 / 3, 9, 1, 2)
    cond = np.zeros((1, 2, 2))
    cond[:, 0, 0] = cond[:, 1, 1] = 1
    model = SourceModel(Alphabet([0, 1]), default_labels(2), cond)
    ts = TrainingSet(model.alphabet, model.labels, np.array([[[0]], [[1]]]))
    want_eps = mpmath.sqrt(2) / ((2 + 1) * mpmath.sqrt(2))
    got_eps = epsilon_theorem1(model, ts, 2.0)
    err_b = abs(mpmath.mpf(got_bound) - want_bound)
    err_e = abs(mpmath.mpf(got_eps) - want_eps)
    ok = err_b <= 1e-12 and err_e <= 1e-12 and abs(want_eps - mpmath.mpf(1) / 3) < 1e-40
    report(capsys, 7, ok, f"bound error {float(err_b):.1e}, epsilon error {float(err_e):.1e}")


def test_criterion_8_properties(capsys, tmp_path):
    rng = np.random.default_rng(8)
    problems = []

    # distance axioms on 10^4 random triples per r
    for r in (1.0, 2.0, 3.0):
        p, q, s = rng.uniform(-5, 5, size=(3, 10**4, 4))
        for a, b, c in zip(p, q, s):
            d = minkowski(a, b, r)
            if d < 0 or abs(d - minkowski(b, a, r)) > 1e-12 or minkowski(a, c, r) > d + minkowski(b, c, r) + 1e-9:
                problems.append(("metric", r))
                break
            if minkowski(a, a, r) != 0:
                problems.append(("identity", r))
                break

    # empirical normalisation and replication invariance
    alpha = Alphabet.range(0, 5)
    for _ in range(1000):
        v = rng.integers(0, 5, size=rng.integers(1, 30))
        f = empirical(v, alpha).freqs
        if abs(f.sum() - 1) > 1e-12 or not np.array_equal(empirical(np.tile(v, 3), alpha).freqs, f):
            problems.append("empirical")
            break

    # NED decisions invariant under permutation and replication of the test vector
    for trial in range(300):
        ts = TrainingSet(alpha, default_labels(3), rng.integers(0, 5, size=(3, 2, 12)))
        v = rng.integers(0, 5, size=12)
        base = classify(ts, v, 2.0, np.random.default_rng(trial))
        if classify(ts, rng.permutation(v), 2.0, np.random.default_rng(trial)) != base:
            problems.append("permutation")
            break
        double = TrainingSet(alpha, ts.labels, np.concatenate([ts.vectors, ts.vectors], axis=2))
        if classify(double, np.tile(v, 2), 2.0, np.random.default_rng(trial)) != base:
            problems.append("replication")
            break

    # generator structure
    for n in (1, 4, 9):
        for model in (gen_overlapping_model(n), gen_nonoverlapping_model(n), gen_iid_model(4, 3, n, rng)):
            if np.abs(model.cond.sum(axis=2) - 1).max() > 1e-12:
                problems.append("row sums")
        ov = gen_overlapping_model(n).cond > 0
        if not (np.array_equal(ov[:, 0], ov[:, 1]) and np.all(ov[:-1] <= ov[1:])):
            problems.append("overlap nesting")
        supp = gen_nonoverlapping_model(n).cond > 0
        if np.any(supp[:, 0].sum(axis=0) > 1) or not np.array_equal(supp[:, 0], supp[:, 1]):
            problems.append("nonoverlap disjointness")

    # byte-identical CSV across two seeded runs
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        run_experiment(ExperimentConfig(family="iid", n_grid=[3, 7], reps=20, tests_per_label=20, seed=11, out_path=str(path)))
    if paths[0].read_bytes() != paths[1].read_bytes():
        problems.append("csv reproducibility")

    report(capsys, 8, not problems, f"problems {problems}")
