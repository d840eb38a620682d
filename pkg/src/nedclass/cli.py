"""Command-line interface: ``nedclass {simulate,bound,classify,oracle}``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bounds
from .baselines import knn_classify, nb_classify
from .core import Alphabet
from .datagen import sample_training
from .formats import load_model, read_training, read_vectors
from .harness import CLASSIFIERS, FAMILIES, ConfigError, ExperimentConfig, run_experiment
from .ned import classify_many
from .oracle import exact_error_oracle


def _classifier_list(text: str) -> list[str]:
    items = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in items if c not in CLASSIFIERS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"classifiers must be a comma list from {CLASSIFIERS}")
    return items


def _r_value(text: str) -> float:
    r = float(text)
    if not r >= 1:
        raise argparse.ArgumentTypeError("r must be >= 1")
    return r


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nedclass", description="Nearest empirical distribution classification experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo sweep and write a CSV")
    sim.add_argument("--config", help="JSON config file; explicit flags override its values")
    sim.add_argument("--family", choices=FAMILIES)
    sim.add_argument("--model", dest="model_path", help="model JSON for --family from-file")
    sim.add_argument("--n-min", type=int)
    sim.add_argument("--n-max", type=int)
    sim.add_argument("--n-step", type=int)
    sim.add_argument("--t", type=int)
    sim.add_argument("--r", type=_r_value)
    sim.add_argument("--labels", dest="num_labels", type=int)
    sim.add_argument("--alphabet-size", type=int)
    sim.add_argument("--tests-per-label", type=int)
    sim.add_argument("--reps", type=int)
    sim.add_argument("--classifiers", type=_classifier_list)
    sim.add_argument("--knn-k", type=int)
    sim.add_argument("--knn-metric", choices=("euclidean", "hamming"))
    sim.add_argument("--nb-smoothing", action="store_true", default=None)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", dest="out_path")

    bnd = sub.add_parser("bound", help="print the three error-probability bounds for a model")
    bnd.add_argument("--model", required=True)
    bnd.add_argument("--n", type=int, help="vector length (position-homogeneous models only if it differs)")
    bnd.add_argument("--t", type=int, default=1)
    bnd.add_argument("--r", type=_r_value, default=2.0)
    bnd.add_argument("--train", help="training CSV for the first bound; sampled from the model if omitted")
    bnd.add_argument("--seed", type=int, default=0)

    cls = sub.add_parser("classify", help="label test vectors from a training CSV")
    cls.add_argument("--train", required=True, help="CSV rows: label,code_1,...,code_n")
    cls.add_argument("--test", required=True, help="CSV rows: code_1,...,code_n")
    cls.add_argument("--classifier", choices=CLASSIFIERS, default="ned")
    cls.add_argument("--r", type=_r_value, default=2.0)
    cls.add_argument("--k", type=int, default=1)
    cls.add_argument("--knn-metric", choices=("euclidean", "hamming"), default="euclidean")
    cls.add_argument("--nb-smoothing", action="store_true")
    cls.add_argument("--model", help="model JSON whose alphabet is used")
    cls.add_argument("--seed", type=int, default=0)
    cls.add_argument("--out", help="write labels here instead of stdout")

    orc = sub.add_parser("oracle", help="exact error probability by enumeration")
    orc.add_argument("--model", required=True)
    orc.add_argument("--t", type=int, default=1)
    orc.add_argument("--r", type=_r_value, default=2.0)
    orc.add_argument("--classifier", choices=CLASSIFIERS, default="ned")
    orc.add_argument("--knn-k", type=int, default=1)
    orc.add_argument("--knn-metric", choices=("euclidean", "hamming"), default="euclidean")
    return parser


def _simulate(args, parser) -> int:
    doc: dict = {}
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
        doc = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    overrides = {
        k: getattr(args, k)
        for k in (
            "family", "model_path", "t", "r", "num_labels", "alphabet_size", "tests_per_label",
            "reps", "classifiers", "knn_k", "knn_metric", "nb_smoothing", "seed", "out_path",
        )
        if getattr(args, k) is not None
    }
    doc.update(overrides)
    if args.n_min is not None or args.n_max is not None or args.n_step is not None:
        lo = args.n_min if args.n_min is not None else 1
        hi = args.n_max if args.n_max is not None else lo
        step = args.n_step if args.n_step is not None else 1
        if step < 1 or hi < lo:
            parser.error("need --n-step >= 1 and --n-max >= --n-min")
        doc["n_grid"] = list(range(lo, hi + 1, step))
    if not doc.get("out_path"):
        parser.error("simulate needs --out (or out_path in the config)")
    cfg = ExperimentConfig.from_dict(doc)
    rows = run_experiment(cfg)
    print(f"wrote {len(rows)} rows to {cfg.out_path}", file=sys.stderr)
    return 0


def _bound(args, parser) -> int:
    model = load_model(args.model)
    if args.n is not None and args.n != model.n:
        if not model.is_homogeneous():
            parser.error(f"model has n={model.n} and is not position-homogeneous; cannot use --n {args.n}")
        model = model.with_length(args.n)
    if args.train:
        ts = read_training(args.train, model.alphabet)
    else:
        ts = sample_training(model, args.t, np.random.default_rng(args.seed))
    thm = bounds.report_theorem1(model, ts, args.r)
    cor = bounds.bound_corollary1(model, args.r)
    app = bounds.bound_appendix(model, args.r, t=ts.t)
    for rep in (thm, cor, app):
        print(f"{rep.kind}\tepsilon={rep.epsilon!r}\tbound={rep.bound!r}")
    return 0


def _classify(args, parser) -> int:
    test = read_vectors(args.test)
    alphabet = load_model(args.model).alphabet if args.model else None
    if alphabet is None:
        # union of observed symbols; unseen symbols contribute nothing to any rule
        import csv

        with open(args.train, newline="") as fh:
            seen = {int(c) for row in csv.reader(fh) if row for c in row[1:]}
        alphabet = Alphabet(sorted(seen | set(test.ravel().tolist())))
    ts = read_training(args.train, alphabet)
    if test.shape[1] != ts.n:
        parser.error(f"test vectors have length {test.shape[1]}, training vectors have {ts.n}")
    rng = np.random.default_rng(args.seed)
    if args.classifier == "ned":
        labels = classify_many(ts, test, args.r, rng)
    elif args.classifier == "nb":
        labels = [nb_classify(ts, v, rng, args.nb_smoothing) for v in test]
    else:
        if not 1 <= args.k <= len(ts.labels) * ts.t:
            parser.error(f"--k must lie in [1, {len(ts.labels) * ts.t}]")
        labels = [knn_classify(ts, v, args.k, rng, args.knn_metric) for v in test]
    text = "".join(f"{lab}\n" for lab in labels)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _oracle(args, parser) -> int:
    model = load_model(args.model)
    value = exact_error_oracle(model, args.t, args.r, args.classifier, knn_k=args.knn_k, knn_metric=args.knn_metric)
    print(repr(value))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"simulate": _simulate, "bound": _bound, "classify": _classify, "oracle": _oracle}[args.command]
    try:
        return handler(args, parser)
    except ConfigError as exc:
        print(f"nedclass: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"nedclass: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
