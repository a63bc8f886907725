"""Markov blanket discovery by kernel-based conditional dependence ranking."""

from .kernels import DataMatrix, GramMatrix, KernelSpec, center, compute_gram, median_bandwidth
from .measures import MeasureKind, evaluate, hsic, m1, m2
from .elimination import (
    EliminationResult,
    FisherZ,
    SubsetResult,
    backward_eliminate,
    bahsic_eliminate,
    fisher_z,
    forward_select,
    iamb,
    partial_correlation,
)
from .synth import (
    MarkovBlanketTruth,
    SweepCell,
    SynthConfig,
    derive_seed,
    gen_mb_dataset,
    sweep,
)
from .evaluation import (
    NormalizedRanking,
    TrialSummary,
    accuracy,
    aggregate,
    clip_ranking,
    normalize_ranks,
)
from .bench import (
    ALGORITHMS,
    AggregateRow,
    ExperimentConfig,
    ResultRecord,
    aggregate_records,
    run_algorithm,
    run_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AggregateRow",
    "DataMatrix",
    "EliminationResult",
    "ExperimentConfig",
    "FisherZ",
    "GramMatrix",
    "KernelSpec",
    "MarkovBlanketTruth",
    "MeasureKind",
    "NormalizedRanking",
    "ResultRecord",
    "SubsetResult",
    "SweepCell",
    "SynthConfig",
    "TrialSummary",
    "accuracy",
    "aggregate",
    "aggregate_records",
    "backward_eliminate",
    "bahsic_eliminate",
    "center",
    "clip_ranking",
    "compute_gram",
    "derive_seed",
    "evaluate",
    "fisher_z",
    "forward_select",
    "gen_mb_dataset",
    "hsic",
    "iamb",
    "m1",
    "m2",
    "median_bandwidth",
    "normalize_ranks",
    "partial_correlation",
    "run_algorithm",
    "run_benchmark",
    "sweep",
]
