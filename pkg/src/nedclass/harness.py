"""Monte Carlo experiment driver and CSV output.

Each replication draws a fresh training set and fresh test vectors, runs the
enabled classifiers and records its error fraction. Every replication gets
its own random substreams derived from ``(seed, n, replication)``, so results
do not depend on execution order or on how many threads are used.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from pathlib import Path

import numpy as np

from . import bounds
from .baselines import knn_predict, nb_log_table, nb_predict
from .core import SourceModel
from .datagen import Sampler, gen_iid_model, gen_nonoverlapping_model, gen_overlapping_model
from .formats import load_model
from .ned import empirical_batch, ned_predict

FAMILIES = ("iid", "overlap", "nonoverlap", "from-file")
CLASSIFIERS = ("ned", "nb", "knn")

# substream layout under SeedSequence(seed, spawn_key=(n, ...))
_MODEL_KEY = 0
_REP_KEY = 1
_STREAMS = ("train", "test", "ned", "nb", "knn", "model")
MODEL_SCOPES = ("per-n", "per-rep")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    family: str = "iid"
    n_grid: list[int] = field(default_factory=lambda: [10])
    t: int = 1
    r: float = 2.0
    alphabet_size: int = 6
    num_labels: int = 2
    tests_per_label: int = 1000
    reps: int = 100
    classifiers: list[str] = field(default_factory=lambda: list(CLASSIFIERS))
    knn_k: int = 1
    knn_metric: str = "euclidean"
    nb_smoothing: bool = False
    seed: int = 0
    out_path: str | None = None
    model_path: str | None = None
    # iid family only: draw one model per n, or a fresh model inside every replication
    model_scope: str = "per-n"

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not self.n_grid:
            raise ConfigError("n_grid must not be empty")
        if any(n < 1 for n in self.n_grid) or list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("n_grid must be strictly ascending positive integers")
        if self.t < 1:
            raise ConfigError("t must be >= 1")
        if not self.r >= 1:
            raise ConfigError("r must be >= 1")
        if self.reps < 1 or self.tests_per_label < 1:
            raise ConfigError("reps and tests_per_label must be >= 1")
        if not self.classifiers or any(c not in CLASSIFIERS for c in self.classifiers):
            raise ConfigError(f"classifiers must be a non-empty subset of {CLASSIFIERS}")
        if len(set(self.classifiers)) != len(self.classifiers):
            raise ConfigError("classifiers must not repeat")
        if self.family == "iid" and (self.alphabet_size < 2 or self.num_labels < 2):
            raise ConfigError("iid family needs alphabet_size >= 2 and num_labels >= 2")
        labels = self.num_labels if self.family == "iid" else 2
        if "knn" in self.classifiers and self.family != "from-file" and not 1 <= self.knn_k <= labels * self.t:
            raise ConfigError(f"knn_k must lie in [1, {labels * self.t}]")
        if self.knn_metric not in ("euclidean", "hamming"):
            raise ConfigError("knn_metric must be 'euclidean' or 'hamming'")
        if self.model_scope not in MODEL_SCOPES:
            raise ConfigError(f"model_scope must be one of {MODEL_SCOPES}")
        if self.model_scope == "per-rep" and self.family != "iid":
            raise ConfigError("model_scope 'per-rep' only applies to the iid family")
        if self.family == "from-file" and not self.model_path:
            raise ConfigError("family 'from-file' needs model_path")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**doc)
        cfg.n_grid = [int(n) for n in cfg.n_grid]
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class ResultRow:
    family: str
    n: int
    t: int
    r: float
    classifier: str
    error_estimate: float
    stderr: float
    bound_thm1_mean: float | None = None
    bound_thm1_min: float | None = None
    bound_thm1_max: float | None = None
    bound_cor1: float | None = None
    bound_appendix: float | None = None
    reps: int = 0
    tests_per_label: int = 0
    seed: int = 0

    @property
    def bound_thm1_mean_clamped(self) -> float | None:
        return None if self.bound_thm1_mean is None else min(self.bound_thm1_mean, 1.0)


CSV_COLUMNS = [f.name for f in fields(ResultRow)] + ["bound_thm1_mean_clamped"]


@dataclass
class SimulationResult:
    """Per-replication outcomes for one source model."""

    errors: dict[str, np.ndarray]
    thm1_bounds: np.ndarray
    trials_per_rep: int
    # filled only when the model is redrawn per replication
    cor1_bounds: np.ndarray | None = None
    appendix_bounds: np.ndarray | None = None

    def mean(self, classifier: str) -> float:
        return float(self.errors[classifier].mean())

    def stderr(self, classifier: str) -> float:
        """Binomial standard error over all labelled trials."""
        p = self.mean(classifier)
        total = self.errors[classifier].size * self.trials_per_rep
        return math.sqrt(p * (1 - p) / total)

    def rep_stderr(self, classifier: str) -> float:
        """Standard error of the mean of per-replication error fractions."""
        e = self.errors[classifier]
        if e.size < 2:
            return float("nan")
        return float(e.std(ddof=1) / math.sqrt(e.size))


def _threads() -> int:
    raw = os.environ.get("NED_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def simulate(
    model,
    *,
    t: int,
    r: float,
    reps: int,
    tests_per_label: int,
    seed: int,
    classifiers=CLASSIFIERS,
    knn_k: int = 1,
    knn_metric: str = "euclidean",
    nb_smoothing: bool = False,
    stream_key: tuple = (),
    threads: int | None = None,
) -> SimulationResult:
    """Run ``reps`` independent replications.

    ``model`` is either a :class:`SourceModel` shared by all replications or a
    callable ``rng -> SourceModel`` invoked once per replication.
    """
    redraw = callable(model) and not isinstance(model, SourceModel)
    shared = None if redraw else _Prepared(model)

    def one(rep: int):
        ss = np.random.SeedSequence(seed, spawn_key=(*stream_key, _REP_KEY, rep))
        rng = dict(zip(_STREAMS, (np.random.default_rng(s) for s in ss.spawn(len(_STREAMS)))))
        prep = _Prepared(model(rng["model"])) if redraw else shared
        nx, n, size = prep.nx, prep.n, prep.size
        true = np.repeat(np.arange(nx), tests_per_label)
        train_streams = rng["train"].spawn(nx)
        test_streams = rng["test"].spawn(nx)
        train_idx = np.stack([prep.sampler.indices(x, t, train_streams[x]) for x in range(nx)])
        test_idx = np.concatenate([prep.sampler.indices(x, tests_per_label, test_streams[x]) for x in range(nx)])
        pooled = empirical_batch(train_idx.reshape(nx, -1), size)
        out = {}
        if "ned" in classifiers:
            out["ned"] = np.mean(ned_predict(pooled, test_idx, r, rng["ned"]) != true)
        if "nb" in classifiers:
            if nb_smoothing:
                table = (pooled * n * t + 1.0) / (n * t + size)
            else:
                table = pooled
            out["nb"] = np.mean(nb_predict(nb_log_table(table), test_idx, rng["nb"]) != true)
        if "knn" in classifiers:
            codes = prep.model.alphabet.codes
            train = codes[train_idx.reshape(nx * t, n)]
            train_labels = np.repeat(np.arange(nx), t)
            pred = knn_predict(train, train_labels, nx, codes[test_idx], knn_k, rng["knn"], knn_metric)
            out["knn"] = np.mean(pred != true)
        eps = bounds.epsilon_from_distributions(pooled, prep.means, r, t)
        extra = None
        if redraw:
            extra = (
                bounds.bound_corollary1(prep.model, r).bound,
                bounds.bound_appendix(prep.model, r, t=t).bound,
            )
        return out, bounds.bound_theorem1(eps, n, t, size), extra, true.size

    workers = _threads() if threads is None else threads
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(reps)))
    else:
        results = [one(rep) for rep in range(reps)]
    errors = {c: np.array([res[0][c] for res in results]) for c in classifiers}
    thm1 = np.array([res[1] for res in results])
    sim = SimulationResult(errors, thm1, results[0][3])
    if redraw:
        sim.cor1_bounds = np.array([res[2][0] for res in results])
        sim.appendix_bounds = np.array([res[2][1] for res in results])
    return sim


class _Prepared:
    """Per-model quantities reused across replications."""

    def __init__(self, model: SourceModel):
        self.model = model
        self.nx, self.n, self.size = model.cond.shape[1], model.n, len(model.alphabet)
        self.sampler = Sampler(model)
        self.means = bounds.mean_distributions(model)


def build_model(cfg: ExperimentConfig, n: int) -> SourceModel:
    if cfg.family == "iid":
        ss = np.random.SeedSequence(cfg.seed, spawn_key=(n, _MODEL_KEY))
        return gen_iid_model(cfg.alphabet_size, cfg.num_labels, n, np.random.default_rng(ss))
    if cfg.family == "overlap":
        return gen_overlapping_model(n)
    if cfg.family == "nonoverlap":
        return gen_nonoverlapping_model(n)
    model = load_model(cfg.model_path)
    if model.n == n:
        return model
    if model.is_homogeneous():
        return model.with_length(n)
    raise ConfigError(f"model file has n={model.n}; it cannot be evaluated at n={n}")


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    cfg.validate()
    rows: list[ResultRow] = []
    for n in cfg.n_grid:
        if cfg.model_scope == "per-rep":
            model = partial(gen_iid_model, cfg.alphabet_size, cfg.num_labels, n)
        else:
            model = build_model(cfg, n)
        sim = simulate(
            model,
            t=cfg.t,
            r=cfg.r,
            reps=cfg.reps,
            tests_per_label=cfg.tests_per_label,
            seed=cfg.seed,
            classifiers=cfg.classifiers,
            knn_k=cfg.knn_k,
            knn_metric=cfg.knn_metric,
            nb_smoothing=cfg.nb_smoothing,
            stream_key=(n,),
        )
        if sim.cor1_bounds is not None:
            cor1 = float(sim.cor1_bounds.mean())
            appendix = float(sim.appendix_bounds.mean())
        else:
            cor1 = bounds.bound_corollary1(model, cfg.r).bound
            appendix = bounds.bound_appendix(model, cfg.r, t=cfg.t).bound
        for clf in cfg.classifiers:
            row = ResultRow(
                family=cfg.family,
                n=n,
                t=cfg.t,
                r=cfg.r,
                classifier=clf,
                error_estimate=sim.mean(clf),
                stderr=sim.stderr(clf),
                reps=cfg.reps,
                tests_per_label=cfg.tests_per_label,
                seed=cfg.seed,
            )
            if clf == "ned":
                row.bound_thm1_mean = float(sim.thm1_bounds.mean())
                row.bound_thm1_min = float(sim.thm1_bounds.min())
                row.bound_thm1_max = float(sim.thm1_bounds.max())
                row.bound_cor1 = cor1
                row.bound_appendix = appendix
            rows.append(row)
    if cfg.out_path:
        emit_csv(rows, cfg.out_path)
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(rows: list[ResultRow], path) -> None:
    if not rows:
        raise ValueError("no result rows to write")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            d = asdict(row)
            d["bound_thm1_mean_clamped"] = row.bound_thm1_mean_clamped
            w.writerow([_cell(d[c]) for c in CSV_COLUMNS])


def read_csv(path) -> list[dict]:
    """Parse a results file back into dicts with numeric fields converted."""
    ints = {"n", "t", "reps", "tests_per_label", "seed"}
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            row: dict = {}
            for k, v in rec.items():
                if k in ("family", "classifier"):
                    row[k] = v
                elif v == "":
                    row[k] = None
                else:
                    row[k] = int(v) if k in ints else float(v)
            out.append(row)
    return out
