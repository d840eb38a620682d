import math

import mpmath
import numpy as np
import pytest

from nedclass.bounds import (
    asymptotic_rate,
    bound_appendix,
    bound_corollary1,
    bound_theorem1,
    epsilon_from_distributions,
    epsilon_theorem1,
    mean_distribution,
    report_theorem1,
)
from nedclass.core import Alphabet, InvalidLabelError, LabelSet, SourceModel, TrainingSet, default_labels
from nedclass.datagen import gen_iid_model, sample_training

mpmath.mp.dps = 50


def point_mass_model(n=1):
    cond = np.zeros((n, 2, 2))
    cond[:, 0, 0] = 1
    cond[:, 1, 1] = 1
    return SourceModel(Alphabet([0, 1]), default_labels(2), cond)


def test_mean_distribution_examples():
    cond = np.array([[[1.0, 0.0], [0.5, 0.5]], [[0.0, 1.0], [0.5, 0.5]]])
    model = SourceModel(Alphabet([0, 1]), default_labels(2), cond)
    np.testing.assert_array_equal(mean_distribution(model, "x1").probs, [0.5, 0.5])
    iid = gen_iid_model(4, 2, 7, np.random.default_rng(0))
    np.testing.assert_allclose(mean_distribution(iid, "x2").probs, iid.cond[0, 1], atol=1e-15)
    third = SourceModel(Alphabet([0, 1]), default_labels(2), np.tile([[1 / 3, 2 / 3]], (3, 2, 1)))
    np.testing.assert_allclose(mean_distribution(third, "x1").probs, [1 / 3, 2 / 3], atol=1e-15)
    with pytest.raises(InvalidLabelError):
        mean_distribution(model, "x9")


def test_mean_distribution_is_probability_vector():
    rng = np.random.default_rng(1)
    for _ in range(20):
        raw = rng.random((5, 3, 4))
        cond = raw / raw.sum(axis=2, keepdims=True)
        model = SourceModel(Alphabet.range(0, 4), default_labels(3), cond)
        for label in model.labels:
            p = mean_distribution(model, label).probs
            assert abs(p.sum() - 1) <= 1e-12
            assert np.all((p >= 0) & (p <= 1))


def test_epsilon_point_mass_instance():
    model = point_mass_model()
    ts = TrainingSet.from_mapping(model.alphabet, {"x1": [[0]], "x2": [[1]]})
    expected = mpmath.mpf(2) / ((2 + mpmath.mpf(1) ** (-mpmath.mpf(1) / 3)) * 2)
    assert epsilon_theorem1(model, ts, 1) == pytest.approx(float(expected), abs=1e-12)
    assert float(expected) == pytest.approx(1 / 3, abs=1e-15)


def test_epsilon_zero_when_training_matches_other_mean():
    model = point_mass_model()
    ts = TrainingSet.from_mapping(model.alphabet, {"x1": [[1]], "x2": [[1]]})
    assert epsilon_theorem1(model, ts, 2) == 0


def test_epsilon_needs_two_labels():
    with pytest.raises(ValueError):
        epsilon_from_distributions(np.array([[1.0, 0.0]]), np.array([[1.0, 0.0]]), 2, 1)


def test_epsilon_relabel_invariant():
    rng = np.random.default_rng(2)
    model = gen_iid_model(5, 3, 6, rng)
    ts = sample_training(model, 2, rng)
    perm = [2, 0, 1]
    model_p = SourceModel(model.alphabet, LabelSet([model.labels.labels[i] for i in perm]), model.cond[:, perm])
    ts_p = TrainingSet(ts.alphabet, model_p.labels, ts.vectors[perm])
    assert epsilon_theorem1(model_p, ts_p, 2) == pytest.approx(epsilon_theorem1(model, ts, 2), rel=1e-15)


def test_bound_theorem1_examples():
    assert bound_theorem1(0.0, 10, 3, 5) == 4 * 5
    expected = 2 * 2 * mpmath.e ** (-2 * 9 * mpmath.mpf(1) / 9) * 2
    assert float(expected) == pytest.approx(8 * math.exp(-2))
    assert bound_theorem1(1 / 3, 9, 1, 2) == pytest.approx(float(expected), rel=1e-12)
    assert bound_theorem1(0.1, 200, 1, 4) < bound_theorem1(0.1, 100, 1, 4)


def test_bound_theorem1_monotone():
    for eps in (0.01, 0.1, 0.3):
        for t in (1, 5, 50):
            vals = [bound_theorem1(eps, n, t, 6) for n in range(1, 200)]
            assert all(a > b for a, b in zip(vals, vals[1:]))
        by_t = [bound_theorem1(eps, 20, t, 6) for t in range(1, 100)]
        assert all(a >= b for a, b in zip(by_t, by_t[1:]))


def test_bound_theorem1_preconditions():
    with pytest.raises(ValueError):
        bound_theorem1(-0.1, 5, 1, 2)
    with pytest.raises(ValueError):
        bound_theorem1(0.1, 0, 1, 2)


def test_corollary1_examples():
    same = SourceModel(Alphabet([0, 1, 2]), default_labels(2), np.full((4, 2, 3), 1 / 3))
    rep = bound_corollary1(same, 2)
    assert rep.epsilon == 0 and rep.bound == 6
    model = point_mass_model(8)
    rep = bound_corollary1(model, 1)
    assert rep.epsilon == pytest.approx(0.5, abs=1e-15)
    assert rep.bound == pytest.approx(float(4 * mpmath.e ** -4), rel=1e-12)
    assert rep.bound == pytest.approx(0.0733, abs=1e-4)


def test_theorem1_approaches_corollary1():
    model = point_mass_model(1)
    cor = bound_corollary1(model, 1).bound
    gaps = []
    for t in (10**3, 10**6, 10**9, 10**12):
        eps = epsilon_from_distributions(np.eye(2), np.eye(2), 1, t)
        gaps.append(abs(bound_theorem1(eps, 1, t, 2) - cor) / cor)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[2] < 1e-3


def test_appendix_examples():
    model = point_mass_model(3)
    rep = bound_appendix(model, 1, t=1)
    assert rep.epsilon == pytest.approx(0.25, abs=1e-15)
    same = SourceModel(Alphabet([0, 1]), default_labels(2), np.full((3, 2, 2), 0.5))
    assert bound_appendix(same, 2, t=4).bound == pytest.approx(2 * 2 + 2 * 2 * 2)


def test_appendix_looser_than_theorem1_at_means():
    rng = np.random.default_rng(3)
    for _ in range(30):
        model = gen_iid_model(int(rng.integers(2, 7)), 2, 20, rng)
        means = model.cond.mean(axis=0)
        for t in (1, 4, 30):
            eps = epsilon_from_distributions(means, means, 2, t)
            thm = bound_theorem1(eps, model.n, t, len(model.alphabet))
            assert bound_appendix(model, 2, t=t).bound >= thm


def test_report_theorem1_recomputable():
    rng = np.random.default_rng(4)
    model = gen_iid_model(3, 2, 15, rng)
    ts = sample_training(model, 3, rng)
    rep = report_theorem1(model, ts, 2)
    assert rep.bound == bound_theorem1(rep.epsilon, 15, 3, 3)
    assert rep.clamped == min(rep.bound, 1)


def test_asymptotic_rate():
    assert asymptotic_rate(16, 1, 4) == pytest.approx(16 * math.exp(-4))
    assert asymptotic_rate(16, 1, 4) == pytest.approx(0.293, abs=1e-3)
    assert asymptotic_rate(50, 2, 4) == pytest.approx(50**2 * math.exp(-1))
    assert asymptotic_rate(10**4, 1, 6) < asymptotic_rate(10**2, 1, 6)
