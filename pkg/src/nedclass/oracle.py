"""Exact error probabilities by exhaustive enumeration on small instances.

Every training-set realisation and every test vector is enumerated and
weighted by its probability under the source model. Decisions use exact
rational arithmetic; only the probability weights are floating point.
Random tie-breaking is accounted for analytically: a decision set ``S`` contributes error mass
``1 - [true label in S] / |S|``.

The decision rules are re-implemented here in plain Python, so this module
shares no code path with the vectorised classifiers it is used to check.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

from .core import SourceModel

MAX_TERMS = 10**8
CLASSIFIERS = ("ned", "nb", "knn")


class InstanceTooLargeError(ValueError):
    def __init__(self, terms: int, limit: int = MAX_TERMS):
        super().__init__(f"exact enumeration needs {terms} terms, limit is {limit}")
        self.terms = terms


def enumeration_terms(model: SourceModel, t: int) -> int:
    size, n, nx = len(model.alphabet), model.n, len(model.labels)
    return size ** (n * t * nx) * size**n


def _realisations(model: SourceModel, x: int, length_vectors: int):
    """All (codes, probability) pairs for ``length_vectors`` independent vectors of label ``x``."""
    n = model.n
    syms = model.alphabet.symbols
    per_pos = []
    for i in range(n):
        row = model.cond[i, x]
        per_pos.append([(syms[k], float(row[k])) for k in range(len(syms)) if row[k] > 0])
    slots = per_pos * length_vectors
    for combo in itertools.product(*slots):
        yield tuple(c for c, _ in combo), math.prod(p for _, p in combo)


def _freqs(seq) -> dict:
    total = len(seq)
    return {s: Fraction(c, total) for s, c in Counter(seq).items()}


def _minkowski_key(p: dict, q: dict, r: float):
    """Monotone proxy for the Minkowski distance; exact for integer ``r``."""
    keys = set(p) | set(q)
    diffs = [abs(p.get(k, 0) - q.get(k, 0)) for k in keys]
    if math.isinf(r):
        return max(diffs, default=Fraction(0))
    if float(r).is_integer():
        return sum((d ** int(r) for d in diffs), Fraction(0))
    return sum(float(d) ** r for d in diffs) ** (1.0 / r)


def _argmin_set(values: list, exact: bool, tol: float = 1e-12) -> frozenset:
    best = min(values)
    if exact:
        return frozenset(i for i, v in enumerate(values) if v == best)
    return frozenset(i for i, v in enumerate(values) if v <= best + tol)


def _ned_sets(train: list, r: float):
    dists = [_freqs(seq) for seq in train]
    exact = math.isinf(r) or float(r).is_integer()

    def decide(test):
        q = _freqs(test)
        return {_argmin_set([_minkowski_key(q, p, r) for p in dists], exact): Fraction(1)}

    return decide


def _nb_sets(train: list, smoothing: bool, alphabet_size: int):
    counts = [Counter(seq) for seq in train]
    totals = [len(seq) for seq in train]

    def decide(test):
        scores = []
        for cnt, tot in zip(counts, totals):
            like = Fraction(1)
            for y in test:
                if smoothing:
                    like *= Fraction(cnt.get(y, 0) + 1, tot + alphabet_size)
                else:
                    like *= Fraction(cnt.get(y, 0), tot)
            scores.append(-like)
        return {_argmin_set(scores, True): Fraction(1)}

    return decide


def _knn_sets(train_vectors: list, k: int, metric: str):
    """``train_vectors`` is a list of ``(label_index, vector)`` pairs."""
    if not 1 <= k <= len(train_vectors):
        raise ValueError(f"k must lie in [1, {len(train_vectors)}], got {k}")

    def dist(a, b):
        if metric == "euclidean":
            return sum((ai - bi) ** 2 for ai, bi in zip(a, b))
        if metric == "hamming":
            return sum(ai != bi for ai, bi in zip(a, b))
        raise ValueError(f"unknown KNN metric {metric!r}")

    num_labels = 1 + max(lab for lab, _ in train_vectors)

    def decide(test):
        d = [(dist(test, v), lab) for lab, v in train_vectors]
        kth = sorted(x for x, _ in d)[k - 1]
        sure = [lab for x, lab in d if x < kth]
        boundary = [lab for x, lab in d if x == kth]
        need = k - len(sure)
        picks = list(itertools.combinations(range(len(boundary)), need))
        out: dict = {}
        for pick in picks:
            votes = [0] * num_labels
            for lab in sure:
                votes[lab] += 1
            for j in pick:
                votes[boundary[j]] += 1
            top = max(votes)
            key = frozenset(i for i, v in enumerate(votes) if v == top)
            out[key] = out.get(key, Fraction(0)) + Fraction(1, len(picks))
        return out

    return decide


def exact_error_oracle(
    model: SourceModel,
    t: int,
    r: float = 2.0,
    classifier: str = "ned",
    *,
    knn_k: int = 1,
    knn_metric: str = "euclidean",
    nb_smoothing: bool = False,
    max_terms: int = MAX_TERMS,
) -> float:
    """Exact error probability of ``classifier`` under uniform labels."""
    if classifier not in CLASSIFIERS:
        raise ValueError(f"unknown classifier {classifier!r}; expected one of {CLASSIFIERS}")
    if t < 1:
        raise ValueError("t must be positive")
    terms = enumeration_terms(model, t)
    if terms > max_terms:
        raise InstanceTooLargeError(terms, max_terms)

    nx, n = len(model.labels), model.n
    per_label = [list(_realisations(model, x, t)) for x in range(nx)]
    tests = [list(_realisations(model, x, 1)) for x in range(nx)]

    error = 0.0
    for combo in itertools.product(*per_label):
        p_train = math.prod(p for _, p in combo)
        pooled = [codes for codes, _ in combo]
        if classifier == "ned":
            decide = _ned_sets(pooled, r)
        elif classifier == "nb":
            decide = _nb_sets(pooled, nb_smoothing, len(model.alphabet))
        else:
            vectors = [
                (x, codes[s * n : (s + 1) * n]) for x, codes in enumerate(pooled) for s in range(t)
            ]
            decide = _knn_sets(vectors, knn_k, knn_metric)
        cache: dict = {}
        for x in range(nx):
            for test, p_test in tests[x]:
                if test not in cache:
                    cache[test] = decide(test)
                miss = sum(
                    (w * (1 - Fraction(int(x in s), len(s))) for s, w in cache[test].items()),
                    Fraction(0),
                )
                error += p_train * p_test * float(miss)
    return error / nx
