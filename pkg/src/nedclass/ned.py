"""Nearest-empirical-distribution classifier.

A test vector is assigned the label whose pooled training vector has the
closest empirical distribution (symbol frequencies) under a Minkowski
distance. Ties are broken uniformly at random.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .core import Alphabet, InvalidSymbolError, TrainingSet, check_vector, concat_training

TIE_TOL = 1e-12
DEFAULT_R = 2.0


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Symbol frequencies of a sequence; ``freqs[k] = count(symbol k) / denom``."""

    freqs: np.ndarray
    denom: int

    def __post_init__(self):
        if self.denom < 1:
            raise ValueError("denominator must be positive")
        if abs(float(np.sum(self.freqs)) - 1.0) > 1e-12:
            raise ValueError("frequencies must sum to 1")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.freqs, dtype=dtype)

    def __len__(self) -> int:
        return len(self.freqs)


def count_symbol(v, y: int, alphabet: Alphabet) -> int:
    """Number of elements of ``v`` equal to ``y``."""
    if y not in alphabet:
        raise InvalidSymbolError(f"symbol {y!r} is not in the alphabet")
    arr = check_vector(v, alphabet)
    return int(np.count_nonzero(arr == y))


def empirical(v, alphabet: Alphabet) -> EmpiricalDistribution:
    arr = np.asarray(v)
    if arr.size == 0:
        raise ValueError("empirical distribution of an empty vector is undefined")
    arr = check_vector(arr, alphabet)
    counts = np.bincount(alphabet.indices(arr), minlength=len(alphabet))
    return EmpiricalDistribution(counts / arr.size, int(arr.size))


def empirical_batch(idx: np.ndarray, size: int) -> np.ndarray:
    """Row-wise empirical distributions of index-coded vectors.

    ``idx`` has shape ``(m, L)`` with entries in ``[0, size)``; returns ``(m, size)``.
    """
    idx = np.asarray(idx)
    m, length = idx.shape
    flat = idx + (np.arange(m)[:, None] * size)
    counts = np.bincount(flat.ravel(), minlength=m * size).reshape(m, size)
    return counts / length


def minkowski(p, q, r: float = DEFAULT_R) -> float:
    """Minkowski distance ``(sum |p_k - q_k|^r)^(1/r)``; ``r = inf`` gives the max norm."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    return float(minkowski_rows(p, q, r))


def minkowski_rows(p: np.ndarray, q: np.ndarray, r: float) -> np.ndarray:
    """Minkowski distance along the last axis with broadcasting."""
    r = float(r)
    if not r >= 1:
        raise ValueError(f"Minkowski order must satisfy r >= 1, got {r}")
    diff = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    if math.isinf(r):
        return diff.max(axis=-1)
    if r == 1:
        return diff.sum(axis=-1)
    if r == 2:
        return np.sqrt(np.einsum("...k,...k->...", diff, diff))
    return np.power(np.power(diff, r).sum(axis=-1), 1.0 / r)


def pick_minimizers(scores: np.ndarray, rng: np.random.Generator, tol: float = TIE_TOL) -> np.ndarray:
    """Row-wise argmin with uniform random choice among entries within ``tol`` of the minimum."""
    scores = np.asarray(scores, dtype=float)
    best = scores.min(axis=1, keepdims=True)
    tied = scores <= best + tol
    keys = rng.random(scores.shape)
    return np.where(tied, keys, -1.0).argmax(axis=1)


def training_distributions(ts: TrainingSet) -> np.ndarray:
    """Empirical distributions of each label's concatenated training vector, shape ``(|X|, |Y|)``."""
    pooled = ts.indices().reshape(len(ts.labels), -1)
    return empirical_batch(pooled, len(ts.alphabet))


def ned_distances(train_dists: np.ndarray, test_idx: np.ndarray, r: float) -> np.ndarray:
    """Distances from each test vector's empirical distribution to every label, shape ``(m, |X|)``."""
    test_dists = empirical_batch(test_idx, train_dists.shape[1])
    return minkowski_rows(test_dists[:, None, :], train_dists[None, :, :], r)


def ned_predict(train_dists: np.ndarray, test_idx: np.ndarray, r: float, rng: np.random.Generator) -> np.ndarray:
    """Label indices chosen for a batch of index-coded test vectors."""
    return pick_minimizers(ned_distances(train_dists, test_idx, r), rng)


def classify(ts: TrainingSet, v, r: float = DEFAULT_R, rng: np.random.Generator | None = None) -> Hashable:
    """Assign ``v`` to the label with the nearest pooled empirical distribution."""
    if rng is None:
        rng = np.random.default_rng()
    arr = check_vector(v, ts.alphabet)
    if arr.size != ts.n:
        raise ValueError(f"test vector has length {arr.size}, training vectors have {ts.n}")
    dists = training_distributions(ts)
    choice = ned_predict(dists, ts.alphabet.indices(arr)[None, :], r, rng)[0]
    return ts.labels.labels[choice]


def classify_many(ts: TrainingSet, vectors, r: float = DEFAULT_R, rng: np.random.Generator | None = None) -> list:
    """Vectorised :func:`classify` over the rows of ``vectors``."""
    if rng is None:
        rng = np.random.default_rng()
    arr = np.asarray(vectors, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != ts.n:
        raise ValueError(f"expected test vectors of shape (m, {ts.n})")
    choice = ned_predict(training_distributions(ts), ts.alphabet.indices(arr), r, rng)
    return [ts.labels.labels[c] for c in choice]


def label_distribution(ts: TrainingSet, label: Hashable) -> EmpiricalDistribution:
    return empirical(concat_training(ts, label), ts.alphabet)
