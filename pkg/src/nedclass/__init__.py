"""Nearest-empirical-distribution classification for feature vectors with
independent, non-identically distributed categorical elements."""

from .baselines import knn_classify, nb_classify, nb_estimate
from .bounds import (
    BoundReport,
    MeanDistribution,
    asymptotic_rate,
    bound_appendix,
    bound_corollary1,
    bound_theorem1,
    epsilon_theorem1,
    mean_distribution,
)
from .core import (
    Alphabet,
    InvalidLabelError,
    InvalidSymbolError,
    LabelSet,
    SourceModel,
    TrainingSet,
    concat_training,
)
from .datagen import (
    gen_iid_model,
    gen_nonoverlapping_model,
    gen_overlapping_model,
    sample_training,
    sample_vector,
)
from .harness import ExperimentConfig, ResultRow, emit_csv, run_experiment
from .ned import EmpiricalDistribution, classify, count_symbol, empirical, minkowski
from .oracle import InstanceTooLargeError, exact_error_oracle

__version__ = "0.1.0"
