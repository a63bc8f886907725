"""Benchmark orchestration: sweeps over algorithms with per-trial records.

Ranking algorithms are scored twice per trial (mean blanket rank of the
normalized ranking, and accuracy of the ranking clipped to the blanket
size); subset algorithms report accuracy only. A failing trial produces an
error record instead of aborting the sweep.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

from .elimination import backward_eliminate, bahsic_eliminate, forward_select, iamb
from .evaluation import accuracy, aggregate, clip_ranking, normalize_ranks
from .kernels import DataMatrix, KernelSpec
from .measures import MeasureKind
from .synth import SynthConfig, sweep
from .errors import TooFewTrialsError

RANKING_ALGORITHMS = ("proposed-f", "proposed-z", "bahsic", "forward-f", "forward-z")
SUBSET_ALGORITHMS = ("iamb",)
ALGORITHMS = RANKING_ALGORITHMS + SUBSET_ALGORITHMS

_MEASURE_OF = {
    "proposed-f": MeasureKind.M1,
    "proposed-z": MeasureKind.M2,
    "forward-f": MeasureKind.M1,
    "forward-z": MeasureKind.M2,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark run: an experiment sweep over a set of algorithms."""

    experiment: str
    algorithms: tuple[str, ...]
    grid: tuple[float, ...]
    trials: int = 1
    seed: int = 0
    kernel: str = "linear"
    sigma: float | None = None
    epsilon: float = 1e-3
    beta: float = 0.0
    alpha: float = 0.05
    out: str | None = None

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("need at least one algorithm")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class ResultRecord:
    """One metric value for one (grid value, trial, algorithm) run."""

    experiment: str
    algorithm: str
    grid_value: float
    trial: int
    seed: int
    metric: str
    value: float
    wall_time_ms: float
    error: str | None = None


def run_algorithm(
    name: str,
    data: DataMatrix,
    truth,
    spec: KernelSpec,
    beta: float = 0.0,
    alpha: float = 0.05,
) -> dict[str, float]:
    """Run one algorithm on one dataset and score it against the truth."""
    if name == "iamb":
        subset = iamb(data, truth.target, alpha=alpha)
        return {"accuracy": accuracy(subset, truth)}
    if name == "bahsic":
        result = bahsic_eliminate(data, truth.target, spec)
    elif name in ("forward-f", "forward-z"):
        result = forward_select(data, truth.target, _MEASURE_OF[name], spec)
    elif name in ("proposed-f", "proposed-z"):
        result = backward_eliminate(data, truth.target, _MEASURE_OF[name], spec, batch_fraction=beta)
    else:
        raise ValueError(f"unknown algorithm {name!r}")
    ascending = result.order if result.direction == "backward" else result.order[::-1]
    ranking = normalize_ranks(ascending, truth)
    clipped = clip_ranking(result, len(truth.mb))
    return {"mean_mb_rank": ranking.mean_mb_rank, "accuracy": accuracy(clipped, truth)}


def run_benchmark(cfg: ExperimentConfig) -> list[ResultRecord]:
    """Run the configured sweep; deterministic apart from wall times.

    Records are canonically ordered by (grid value, algorithm, trial,
    metric) so any execution order produces the same artifact.
    """
    base = SynthConfig(seed=cfg.seed)
    spec = KernelSpec(family=cfg.kernel, sigma=cfg.sigma, epsilon=cfg.epsilon)
    cells = sweep(cfg.experiment, cfg.grid, base, cfg.trials)
    records: list[ResultRecord] = []
    for cell in cells:
        for trial, ((data, truth), seed) in enumerate(zip(cell.datasets, cell.seeds)):
            for alg in cfg.algorithms:
                start = time.perf_counter()
                try:
                    metrics = run_algorithm(alg, data, truth, spec, beta=cfg.beta, alpha=cfg.alpha)
                except Exception as exc:
                    elapsed_ms = (time.perf_counter() - start) * 1e3
                    records.append(
                        ResultRecord(
                            experiment=cfg.experiment,
                            algorithm=alg,
                            grid_value=cell.value,
                            trial=trial,
                            seed=seed,
                            metric="error",
                            value=math.nan,
                            wall_time_ms=elapsed_ms,
                            error=f"{type(exc).__name__}: {exc}",
                        )
                    )
                    continue
                elapsed_ms = (time.perf_counter() - start) * 1e3
                for metric, value in metrics.items():
                    records.append(
                        ResultRecord(
                            experiment=cfg.experiment,
                            algorithm=alg,
                            grid_value=cell.value,
                            trial=trial,
                            seed=seed,
                            metric=metric,
                            value=float(value),
                            wall_time_ms=elapsed_ms,
                        )
                    )
    records.sort(key=lambda r: (r.grid_value, r.algorithm, r.trial, r.metric))
    return records


@dataclass(frozen=True)
class AggregateRow:
    """Mean and CI of one metric for one algorithm at one grid value."""

    grid_value: float
    algorithm: str
    metric: str
    mean: float
    ci95: float


def aggregate_records(records: Sequence[ResultRecord]) -> list[AggregateRow]:
    """Plot-ready per-grid-value table; error records are excluded."""
    groups: dict[tuple[float, str, str], list[float]] = {}
    for r in records:
        if r.metric == "error":
            continue
        groups.setdefault((r.grid_value, r.algorithm, r.metric), []).append(r.value)
    rows = []
    for (grid_value, algorithm, metric), values in sorted(groups.items()):
        try:
            mean, ci = aggregate(values)
        except TooFewTrialsError:
            mean, ci = values[0], math.nan
        rows.append(AggregateRow(grid_value=grid_value, algorithm=algorithm, metric=metric, mean=mean, ci95=ci))
    return rows
