"""Benchmark classifiers: naive Bayes with plug-in estimates, and k-nearest neighbours."""

from __future__ import annotations

from typing import Hashable

import numpy as np

from .core import TrainingSet, check_vector
from .ned import empirical_batch, pick_minimizers

TIE_TOL = 1e-12
METRICS = ("euclidean", "hamming")


def nb_estimate(ts: TrainingSet, label: Hashable, smoothing: bool = False) -> np.ndarray:
    """Symbol probabilities estimated from the pooled training vectors of ``label``.

    The same estimate is used at every position. With ``smoothing`` the counts
    get add-one (Laplace) smoothing.
    """
    x = ts.labels.index(label)
    return nb_table(ts, smoothing)[x]


def nb_table(ts: TrainingSet, smoothing: bool = False) -> np.ndarray:
    """Plug-in estimates for every label, shape ``(|X|, |Y|)``."""
    pooled = ts.indices().reshape(len(ts.labels), -1)
    size = len(ts.alphabet)
    if not smoothing:
        return empirical_batch(pooled, size)
    counts = empirical_batch(pooled, size) * pooled.shape[1]
    return (counts + 1.0) / (pooled.shape[1] + size)


def nb_log_table(table: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(table)


def nb_scores(log_table: np.ndarray, test_idx: np.ndarray) -> np.ndarray:
    """Log-likelihood of each test vector under each label, shape ``(m, |X|)``; ``-inf`` for zero likelihood."""
    # (m, n, |X|) gather, summed over positions
    return log_table.T[test_idx].sum(axis=1)


def nb_predict(log_table: np.ndarray, test_idx: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    scores = nb_scores(log_table, test_idx)
    # argmax == argmin of the negated scores; all -inf rows tie across every label
    return pick_minimizers(-scores, rng, TIE_TOL)


def nb_classify(ts: TrainingSet, v, rng: np.random.Generator | None = None, smoothing: bool = False) -> Hashable:
    """Maximum-likelihood label under the naive Bayes plug-in model."""
    if rng is None:
        rng = np.random.default_rng()
    arr = check_vector(v, ts.alphabet)
    if arr.size != ts.n:
        raise ValueError(f"test vector has length {arr.size}, training vectors have {ts.n}")
    log_table = nb_log_table(nb_table(ts, smoothing))
    choice = nb_predict(log_table, ts.alphabet.indices(arr)[None, :], rng)[0]
    return ts.labels.labels[choice]


def knn_distances(train: np.ndarray, test: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Distances between test rows ``(m, n)`` and training rows ``(N, n)``, shape ``(m, N)``.

    Euclidean distances are returned squared: they are exact integers on
    integer codes and order identically.
    """
    if metric == "euclidean":
        diff = test[:, None, :].astype(np.float64) - train[None, :, :]
        return np.einsum("mNk,mNk->mN", diff, diff)
    if metric == "hamming":
        return (test[:, None, :] != train[None, :, :]).sum(axis=2).astype(np.float64)
    raise ValueError(f"unknown KNN metric {metric!r}; expected one of {METRICS}")


def knn_predict(
    train: np.ndarray,
    train_labels: np.ndarray,
    num_labels: int,
    test: np.ndarray,
    k: int,
    rng: np.random.Generator,
    metric: str = "euclidean",
) -> np.ndarray:
    """Majority label among the ``k`` nearest training rows.

    Distance ties at the k-th neighbour and vote ties are both broken
    uniformly at random.
    """
    total = train.shape[0]
    if not 1 <= k <= total:
        raise ValueError(f"k must lie in [1, {total}], got {k}")
    d = knn_distances(train, test, metric)
    m = d.shape[0]
    keys = rng.random(d.shape)
    order = np.lexsort((keys, d), axis=1)[:, :k]
    nearest = train_labels[order]
    votes = np.zeros((m, num_labels))
    np.add.at(votes, (np.repeat(np.arange(m), k), nearest.ravel()), 1.0)
    return pick_minimizers(-votes, rng, 0.5)


def training_matrix(ts: TrainingSet) -> tuple[np.ndarray, np.ndarray]:
    """Training vectors as rows ``(|X| t, n)`` with their label indices."""
    nx, t, n = ts.vectors.shape
    return ts.vectors.reshape(nx * t, n), np.repeat(np.arange(nx), t)


def knn_classify(
    ts: TrainingSet,
    v,
    k: int = 1,
    rng: np.random.Generator | None = None,
    metric: str = "euclidean",
) -> Hashable:
    """k-nearest-neighbour vote over the individual training vectors, using symbol codes as coordinates."""
    if rng is None:
        rng = np.random.default_rng()
    arr = check_vector(v, ts.alphabet)
    if arr.size != ts.n:
        raise ValueError(f"test vector has length {arr.size}, training vectors have {ts.n}")
    train, train_labels = training_matrix(ts)
    choice = knn_predict(train, train_labels, len(ts.labels), arr[None, :], k, rng, metric)[0]
    return ts.labels.labels[choice]
