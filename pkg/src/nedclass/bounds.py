"""Upper bounds on the error probability of the nearest-empirical-distribution classifier.

Three forms are provided:

* ``theorem1``: depends on the realised training set through its pooled
  empirical distributions;
* ``corollary1``: the limit of infinitely many training vectors per label;
* ``appendix``: a looser form that depends only on the source model, used to
  show the error vanishes as the vector length grows.

All bounds are returned unclamped and may exceed 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .core import SourceModel, TrainingSet
from .ned import minkowski_rows, training_distributions

KINDS = ("theorem1", "corollary1", "appendix")


@dataclass(frozen=True, eq=False)
class MeanDistribution:
    """Position-averaged symbol distribution of one label."""

    probs: np.ndarray
    label: Hashable


@dataclass(frozen=True)
class BoundReport:
    epsilon: float
    bound: float
    kind: str
    n: int
    t: int | None
    r: float

    @property
    def clamped(self) -> float:
        return min(self.bound, 1.0)


def _alphabet_root(alphabet_size: int, r: float) -> float:
    return 1.0 if math.isinf(r) else alphabet_size ** (1.0 / r)


def _min_cross_distance(left: np.ndarray, right: np.ndarray, r: float) -> float:
    """``min_{i != j} ||left_i - right_j||_r``."""
    count = left.shape[0]
    if count < 2:
        raise ValueError("bounds need at least two labels")
    d = minkowski_rows(left[:, None, :], right[None, :, :], r)
    return float(min(d[i, j] for i, j in itertools.permutations(range(count), 2)))


def mean_distributions(model: SourceModel) -> np.ndarray:
    """Mean distributions of all labels, shape ``(|X|, |Y|)``."""
    return model.cond.mean(axis=0)


def mean_distribution(model: SourceModel, label: Hashable) -> MeanDistribution:
    x = model.labels.index(label)
    return MeanDistribution(mean_distributions(model)[x], label)


def epsilon_from_distributions(train_dists: np.ndarray, means: np.ndarray, r: float, t: int) -> float:
    alphabet_size = means.shape[1]
    num = _min_cross_distance(np.asarray(train_dists, float), np.asarray(means, float), r)
    return num / ((2.0 + t ** (-1.0 / 3.0)) * _alphabet_root(alphabet_size, r))


def epsilon_theorem1(model: SourceModel, ts: TrainingSet, r: float) -> float:
    """Separation between each label's training distribution and the other labels' mean distributions."""
    if ts.labels != model.labels or ts.alphabet != model.alphabet or ts.n != model.n:
        raise ValueError("training set does not match the source model")
    return epsilon_from_distributions(training_distributions(ts), mean_distributions(model), r, ts.t)


def bound_theorem1(epsilon: float, n: int, t: int, alphabet_size: int) -> float:
    if epsilon < 0 or n < 1 or t < 1 or alphabet_size < 1:
        raise ValueError("need epsilon >= 0, n >= 1, t >= 1 and alphabet_size >= 1")
    e2 = epsilon * epsilon
    return 2 * alphabet_size * (math.exp(-2 * n * e2) + math.exp(-2 * n * t ** (1.0 / 3.0) * e2))


def report_theorem1(model: SourceModel, ts: TrainingSet, r: float) -> BoundReport:
    eps = epsilon_theorem1(model, ts, r)
    return BoundReport(eps, bound_theorem1(eps, model.n, ts.t, len(model.alphabet)), "theorem1", model.n, ts.t, r)


def bound_corollary1(model: SourceModel, r: float, n: int | None = None) -> BoundReport:
    """Bound when the label distributions are effectively known (t -> infinity)."""
    n = model.n if n is None else n
    means = mean_distributions(model)
    size = means.shape[1]
    eps = _min_cross_distance(means, means, r) / (2.0 * _alphabet_root(size, r))
    bound = 2 * size * math.exp(-2 * n * eps * eps)
    return BoundReport(eps, bound, "corollary1", n, None, r)


def bound_appendix(model: SourceModel, r: float, n: int | None = None, t: int = 1) -> BoundReport:
    """Training-independent bound, looser than :func:`bound_theorem1`."""
    n = model.n if n is None else n
    if t < 1:
        raise ValueError("t must be positive")
    means = mean_distributions(model)
    num_labels, size = means.shape
    eps = _min_cross_distance(means, means, r) / (2.0 * (1.0 + t ** (-1.0 / 3.0)) * _alphabet_root(size, r))
    e2 = eps * eps
    bound = 2 * size * math.exp(-2 * n * e2) + 2 * num_labels * size * math.exp(-2 * n * t ** (1.0 / 3.0) * e2)
    return BoundReport(eps, bound, "appendix", n, t, r)


def asymptotic_rate(n: int, m: int, r: float) -> float:
    """Envelope ``n^m exp(-n^(1 - 2m/r))`` of the appendix bound for ``|Y| <= n^m``.

    It decays to zero only when ``r > 2m``; at ``r == 2m`` it grows like ``n^m / e``.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    exponent = 1.0 - (0.0 if math.isinf(r) else 2.0 * m / r)
    return float(n) ** m * math.exp(-(float(n) ** exponent))
