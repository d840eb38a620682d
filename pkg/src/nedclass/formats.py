"""File formats: source models as JSON, feature vectors as CSV rows of integer codes."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import Alphabet, LabelSet, SourceModel, TrainingSet


def model_to_dict(model: SourceModel) -> dict:
    return {
        "n": model.n,
        "labels": list(model.labels.labels),
        "alphabet": list(model.alphabet.symbols),
        "cond": model.cond.tolist(),
    }


def model_from_dict(doc: dict) -> SourceModel:
    try:
        alphabet = Alphabet(doc["alphabet"])
        labels = LabelSet(doc["labels"])
        cond = np.asarray(doc["cond"], dtype=float)
    except KeyError as exc:
        raise ValueError(f"model document is missing field {exc.args[0]!r}") from None
    model = SourceModel(alphabet, labels, cond)
    if "n" in doc and int(doc["n"]) != model.n:
        raise ValueError(f"model declares n={doc['n']} but cond has {model.n} positions")
    return model


def save_model(model: SourceModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n")


def load_model(path) -> SourceModel:
    return model_from_dict(json.loads(Path(path).read_text()))


def read_vectors(path) -> np.ndarray:
    """Read a CSV of integer-coded feature vectors, one vector per row."""
    with open(path, newline="") as fh:
        rows = [[int(c) for c in row] for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path}: no feature vectors")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: rows have differing lengths")
    return np.asarray(rows, dtype=np.int64)


def write_vectors(vectors, path) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(np.asarray(vectors).tolist())


def read_training(path, alphabet: Alphabet | None = None) -> TrainingSet:
    """Read labelled training vectors; each row is ``label,code_1,...,code_n``.

    Labels keep their order of first appearance. Without an explicit alphabet,
    the sorted set of codes present in the file is used.
    """
    groups: dict[str, list[list[int]]] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            groups.setdefault(row[0], []).append([int(c) for c in row[1:]])
    if not groups:
        raise ValueError(f"{path}: no training vectors")
    if alphabet is None:
        alphabet = Alphabet(sorted({c for vs in groups.values() for v in vs for c in v}))
    return TrainingSet.from_mapping(alphabet, groups)


def write_training(ts: TrainingSet, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for label, vecs in zip(ts.labels, ts.vectors):
            for v in vecs:
                w.writerow([label, *v.tolist()])
