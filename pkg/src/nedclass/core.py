"""Domain types: alphabets, label sets, source models and training sets.

Feature vectors are plain 1-d integer numpy arrays holding symbol codes.
Batches of vectors are 2-d arrays of shape ``(m, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

PROB_TOL = 1e-12


class InvalidLabelError(KeyError):
    """Raised when a label is not part of the label set."""


class InvalidSymbolError(ValueError):
    """Raised when a symbol code is not part of the alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of integer symbol codes. Index k corresponds to ``symbols[k]``."""

    symbols: tuple[int, ...]
    _sorted: np.ndarray = field(init=False, repr=False, compare=False)
    _order: np.ndarray = field(init=False, repr=False, compare=False)
    _offset: int | None = field(init=False, repr=False, compare=False)

    def __init__(self, symbols: Sequence[int]):
        syms = tuple(int(s) for s in symbols)
        if len(syms) < 1:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", syms)
        arr = np.asarray(syms, dtype=np.int64)
        order = np.argsort(arr, kind="stable")
        object.__setattr__(self, "_sorted", arr[order])
        object.__setattr__(self, "_order", order)
        # contiguous ascending alphabets map to indices by a shift
        contiguous = bool(np.all(np.diff(arr) == 1))
        object.__setattr__(self, "_offset", syms[0] if contiguous else None)

    @classmethod
    def range(cls, start: int, stop: int) -> "Alphabet":
        """Alphabet ``{start, ..., stop - 1}``."""
        return cls(range(start, stop))

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        try:
            self.index(symbol)  # type: ignore[arg-type]
        except InvalidSymbolError:
            return False
        return True

    @property
    def codes(self) -> np.ndarray:
        return np.asarray(self.symbols, dtype=np.int64)

    def index(self, symbol: int) -> int:
        return int(self.indices(np.asarray([symbol]))[0])

    def indices(self, codes: np.ndarray) -> np.ndarray:
        """Map an array of symbol codes to alphabet indices (same shape)."""
        codes = np.asarray(codes)
        if codes.dtype.kind not in "iu":
            if codes.size and not np.all(np.mod(codes, 1) == 0):
                raise InvalidSymbolError("symbol codes must be integers")
            codes = codes.astype(np.int64)
        k = len(self.symbols)
        if self._offset is not None:
            idx = codes.astype(np.int64) - self._offset
            bad = (idx < 0) | (idx >= k)
        else:
            pos = np.searchsorted(self._sorted, codes)
            pos_c = np.minimum(pos, k - 1)
            bad = self._sorted[pos_c] != codes
            idx = self._order[pos_c]
        if np.any(bad):
            missing = np.asarray(codes)[bad].ravel()[0]
            raise InvalidSymbolError(f"symbol {int(missing)} is not in the alphabet")
        return idx

    def to_codes(self, indices: np.ndarray) -> np.ndarray:
        return self.codes[np.asarray(indices)]


@dataclass(frozen=True)
class LabelSet:
    """Ordered, distinct labels. The label prior is uniform and never stored."""

    labels: tuple[Hashable, ...]

    def __init__(self, labels: Sequence[Hashable]):
        labs = tuple(labels)
        if len(labs) < 2:
            raise ValueError("need at least two labels")
        if len(set(labs)) != len(labs):
            raise ValueError("labels must be distinct")
        object.__setattr__(self, "labels", labs)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: Hashable) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidLabelError(label) from None


def default_labels(count: int) -> LabelSet:
    return LabelSet([f"x{i + 1}" for i in range(count)])


def check_vector(v: Sequence[int] | np.ndarray, alphabet: Alphabet) -> np.ndarray:
    """Validate a feature vector against ``alphabet`` and return it as an int array."""
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("feature vector must be a non-empty 1-d sequence")
    alphabet.indices(arr)
    return arr.astype(np.int64)


@dataclass(frozen=True, eq=False)
class SourceModel:
    """Per-position, label-conditional symbol distributions.

    ``cond[i, x, k]`` is the probability of symbol ``alphabet.symbols[k]`` at
    position ``i`` (0-based) for the label with index ``x``.
    """

    alphabet: Alphabet
    labels: LabelSet
    cond: np.ndarray

    def __post_init__(self):
        cond = np.array(self.cond, dtype=float)
        if cond.ndim != 3:
            raise ValueError("cond must have shape (n, |X|, |Y|)")
        n, nx, ny = cond.shape
        if n < 1:
            raise ValueError("n must be positive")
        if nx != len(self.labels) or ny != len(self.alphabet):
            raise ValueError(
                f"cond shape {cond.shape} does not match "
                f"|X|={len(self.labels)}, |Y|={len(self.alphabet)}"
            )
        if np.any(cond < 0) or np.any(cond > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        sums = cond.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > PROB_TOL):
            raise ValueError("every row p_i(.|x) must sum to 1")
        cond.setflags(write=False)
        object.__setattr__(self, "cond", cond)

    @property
    def n(self) -> int:
        return self.cond.shape[0]

    def row(self, position: int, label: Hashable) -> np.ndarray:
        return self.cond[position, self.labels.index(label)]

    def is_homogeneous(self) -> bool:
        """True when every position shares the same distributions (i.i.d. elements)."""
        return bool(np.all(self.cond == self.cond[:1]))

    def with_length(self, n: int) -> "SourceModel":
        """Resize a position-homogeneous model to length ``n``."""
        if not self.is_homogeneous():
            raise ValueError("only position-homogeneous models can be resized")
        cond = np.repeat(self.cond[:1], n, axis=0)
        return SourceModel(self.alphabet, self.labels, cond)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """``t`` labelled training vectors for every label.

    ``vectors[x, s]`` is the ``s``-th training vector (symbol codes) of the label
    with index ``x``; shape ``(|X|, t, n)``.
    """

    alphabet: Alphabet
    labels: LabelSet
    vectors: np.ndarray

    def __post_init__(self):
        vecs = np.array(self.vectors, dtype=np.int64)
        if vecs.ndim != 3:
            raise ValueError("vectors must have shape (|X|, t, n)")
        if vecs.shape[0] != len(self.labels):
            raise ValueError("every label needs its own training vectors")
        if vecs.shape[1] < 1 or vecs.shape[2] < 1:
            raise ValueError("need t >= 1 vectors of length n >= 1")
        self.alphabet.indices(vecs)
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def from_mapping(cls, alphabet: Alphabet, data: dict) -> "TrainingSet":
        """Build from ``{label: [vector, ...]}``; every label needs the same count."""
        labels = LabelSet(list(data))
        counts = {len(vs) for vs in data.values()}
        if len(counts) != 1:
            raise ValueError("every label must have the same number of training vectors")
        return cls(alphabet, labels, np.array([list(vs) for vs in data.values()]))

    @property
    def t(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.vectors.shape[2]

    def indices(self) -> np.ndarray:
        """Training vectors as alphabet indices, shape ``(|X|, t, n)``."""
        return self.alphabet.indices(self.vectors)


def concat_training(ts: TrainingSet, label: Hashable) -> np.ndarray:
    """Concatenate the ``t`` training vectors of ``label`` into one length-``nt`` vector."""
    x = ts.labels.index(label)
    return ts.vectors[x].reshape(-1).copy()
