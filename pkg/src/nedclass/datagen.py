"""Synthetic source families and samplers.

Three families are available:

* ``iid``: one random distribution per label, repeated at every position;
* ``overlap``: alphabet ``{-n..n}``, position ``i`` supported on the centred
  window ``{-i..i}`` (nested supports);
* ``nonoverlap``: alphabet ``{1..(n+1)^2-1}``, position ``i`` supported on its
  own block ``{i^2..(i+1)^2-1}`` (disjoint supports).

In the structured families the first label is triangular on the support and
the second is flat.
"""

from __future__ import annotations

from typing import Hashable

import numpy as np

from .core import Alphabet, LabelSet, SourceModel, TrainingSet, default_labels


def triangular_weights(i: int) -> np.ndarray:
    """Normalised weights ``1, 2, ..., i, i+1, i, ..., 1`` (length ``2i+1``)."""
    up = np.arange(1, i + 2, dtype=float)
    raw = np.concatenate([up, up[-2::-1]])
    return raw / raw.sum()


def flat_weights(i: int) -> np.ndarray:
    return np.full(2 * i + 1, 1.0 / (2 * i + 1))


def gen_iid_model(alphabet_size: int, num_labels: int, n: int, rng: np.random.Generator) -> SourceModel:
    """Random i.i.d. source: each label gets normalised uniform(0, 1) weights, shared by all positions."""
    if alphabet_size < 2 or num_labels < 2 or n < 1:
        raise ValueError("need alphabet_size >= 2, num_labels >= 2 and n >= 1")
    raw = rng.random((num_labels, alphabet_size))
    dists = raw / raw.sum(axis=1, keepdims=True)
    cond = np.broadcast_to(dists, (n, num_labels, alphabet_size))
    return SourceModel(Alphabet.range(1, alphabet_size + 1), default_labels(num_labels), cond)


def gen_overlapping_model(n: int) -> SourceModel:
    if n < 1:
        raise ValueError("n must be positive")
    size = 2 * n + 1
    cond = np.zeros((n, 2, size))
    for i in range(1, n + 1):
        # support {-i..i}; symbol y sits at index y + n
        lo = n - i
        cond[i - 1, 0, lo : lo + 2 * i + 1] = triangular_weights(i)
        cond[i - 1, 1, lo : lo + 2 * i + 1] = flat_weights(i)
    return SourceModel(Alphabet.range(-n, n + 1), default_labels(2), cond)


def gen_nonoverlapping_model(n: int) -> SourceModel:
    if n < 1:
        raise ValueError("n must be positive")
    size = (n + 1) ** 2 - 1
    cond = np.zeros((n, 2, size))
    for i in range(1, n + 1):
        # support {i^2 .. (i+1)^2 - 1}; symbol y sits at index y - 1
        lo = i * i - 1
        cond[i - 1, 0, lo : lo + 2 * i + 1] = triangular_weights(i)
        cond[i - 1, 1, lo : lo + 2 * i + 1] = flat_weights(i)
    return SourceModel(Alphabet.range(1, size + 1), default_labels(2), cond)


class Sampler:
    """Inverse-CDF sampler with cumulative rows precomputed once per model."""

    def __init__(self, model: SourceModel):
        self.model = model
        n, nx, size = model.cond.shape
        cum = np.cumsum(model.cond, axis=2)
        # row i of label x lives in [2i, 2i + 1] so all rows search in one sorted array
        offsets = 2.0 * np.arange(n)[:, None]
        self._flat = [np.ascontiguousarray((cum[:, x, :] + offsets).ravel()) for x in range(nx)]
        self._offsets = 2.0 * np.arange(n)
        self._base = np.arange(n) * size
        # last symbol with positive probability in each row
        self._last = size - 1 - np.argmax(model.cond[:, :, ::-1] > 0, axis=2)

    def indices(self, label_index: int, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` vectors drawn from label ``label_index``, as alphabet indices, shape ``(count, n)``."""
        n = self.model.n
        u = rng.random((count, n)) + self._offsets
        pos = np.searchsorted(self._flat[label_index], u, side="right") - self._base
        return np.minimum(pos, self._last[:, label_index])

    def codes(self, label_index: int, count: int, rng: np.random.Generator) -> np.ndarray:
        return self.model.alphabet.to_codes(self.indices(label_index, count, rng))


def sample_vector(model: SourceModel, label: Hashable, rng: np.random.Generator) -> np.ndarray:
    """One feature vector (symbol codes) drawn from ``label``, elements independent across positions."""
    x = model.labels.index(label)
    return Sampler(model).codes(x, 1, rng)[0]


def sample_training(model: SourceModel, t: int, rng: np.random.Generator) -> TrainingSet:
    """``t`` independent vectors per label, each label drawing from its own substream."""
    if t < 1:
        raise ValueError("t must be positive")
    sampler = Sampler(model)
    streams = rng.spawn(len(model.labels))
    vecs = np.stack([sampler.codes(x, t, streams[x]) for x in range(len(model.labels))])
    return TrainingSet(model.alphabet, model.labels, vecs)
