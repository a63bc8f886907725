"""Synthetic blanket-recovery benchmarks.

The base dataset is a linear-Gaussian collider structure around a target Y:

    P1  P2      S1  S2          parents and spouses, N(0, 1) roots
      \\ /        |  |
       Y ------- C1 C2          Y = w*(P1 + P2) + noise
                                C_i = w*(S_i + Y) + noise

plus `n_extraneous` independent N(0, 1) columns. Spouses are marginally
independent of Y but dependent given their child, which is what separates
conditional from marginal dependence methods. Optional extra edges with
weight 1.0 are sampled among the non-target columns (forward in the fixed
topological order P1, P2, S1, S2, E*, C1, C2); an edge into a child makes
its source a co-parent of that child, so the reported blanket is always the
true blanket of the graph that was actually generated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .errors import BadExperimentError
from .kernels import DataMatrix

EXPERIMENTS = ("samples", "noise", "edges", "extraneous", "weights")

# row count held fixed by every sweep except the samples one
DEFAULT_FIXED_SAMPLES = 70

_ROLES = ("parent", "child", "spouse", "extraneous")


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for one synthetic dataset."""

    n_samples: int = 500
    noise_sd: float = 1.0
    n_extraneous: int = 10
    extra_edges: int = 0
    mb_weight: float = 1.0
    seed: int = 0
    spouses_per_child: str = "one"

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if self.n_extraneous < 0:
            raise ValueError(f"n_extraneous must be >= 0, got {self.n_extraneous}")
        if self.extra_edges < 0:
            raise ValueError(f"extra_edges must be >= 0, got {self.extra_edges}")
        if not np.isfinite(self.mb_weight):
            raise ValueError("mb_weight must be finite")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.spouses_per_child not in ("one", "both"):
            raise ValueError(f"spouses_per_child must be 'one' or 'both', got {self.spouses_per_child!r}")


@dataclass(frozen=True)
class MarkovBlanketTruth:
    """Target index plus the ground-truth blanket used by all metrics."""

    target: int
    mb: frozenset[int]
    roles: Mapping[int, str] | None = None

    def __post_init__(self):
        mb = frozenset(int(v) for v in self.mb)
        if self.target in mb:
            raise ValueError("target cannot be a member of its own blanket")
        if self.roles is not None:
            roles = dict(self.roles)
            for v, role in roles.items():
                if role not in _ROLES:
                    raise ValueError(f"unknown role {role!r}")
                if (role != "extraneous") != (v in mb):
                    raise ValueError(f"role {role!r} of variable {v} contradicts blanket membership")
            object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "mb", mb)


def _column_names(n_extraneous: int) -> tuple[str, ...]:
    return ("P1", "P2", "S1", "S2", "C1", "C2", "Y") + tuple(
        f"E{j + 1}" for j in range(n_extraneous)
    )


def gen_mb_dataset(cfg: SynthConfig) -> tuple[DataMatrix, MarkovBlanketTruth]:
    """Generate one dataset with columns [P1, P2, S1, S2, C1, C2, Y, E1..Ek].

    Fully reproducible from cfg.seed. The returned truth lists the blanket
    of the generated graph: the six structural members plus any extra-edge
    source that became a co-parent of a child.
    """
    rng = np.random.default_rng(cfg.seed)
    n, k, w = cfg.n_samples, cfg.n_extraneous, cfg.mb_weight

    # non-target topological order: P1 P2 S1 S2 E1..Ek C1 C2
    n_nt = 6 + k
    child_topo = (n_nt - 2, n_nt - 1)
    pairs = [(u, v) for u in range(n_nt) for v in range(u + 1, n_nt)]
    if cfg.extra_edges > len(pairs):
        raise ValueError(
            f"extra_edges={cfg.extra_edges} exceeds the {len(pairs)} available ordered pairs"
        )
    incoming: dict[int, list[int]] = {v: [] for v in range(n_nt)}
    if cfg.extra_edges:
        chosen = rng.choice(len(pairs), size=cfg.extra_edges, replace=False)
        for p in sorted(int(c) for c in chosen):
            u, v = pairs[p]
            incoming[v].append(u)

    cols: list[np.ndarray | None] = [None] * n_nt

    def settle(topo_idx: int, base: np.ndarray) -> None:
        for u in incoming[topo_idx]:
            base = base + cols[u]
        cols[topo_idx] = base

    for t in range(4):  # P1, P2, S1, S2
        settle(t, rng.standard_normal(n))
    for j in range(k):  # E1..Ek
        settle(4 + j, rng.standard_normal(n))
    y = w * (cols[0] + cols[1]) + cfg.noise_sd * rng.standard_normal(n)
    for i, t in enumerate(child_topo):  # C1, C2
        if cfg.spouses_per_child == "one":
            spouse_sum = cols[2 + i]
        else:
            spouse_sum = cols[2] + cols[3]
        settle(t, w * (spouse_sum + y) + cfg.noise_sd * rng.standard_normal(n))

    # column order: [P1, P2, S1, S2, C1, C2, Y, E1..Ek]
    topo_to_col = {0: 0, 1: 1, 2: 2, 3: 3, child_topo[0]: 4, child_topo[1]: 5}
    for j in range(k):
        topo_to_col[4 + j] = 7 + j
    values = np.empty((n, n_nt + 1))
    for t, c in topo_to_col.items():
        values[:, c] = cols[t]
    values[:, 6] = y

    roles = {0: "parent", 1: "parent", 2: "spouse", 3: "spouse", 4: "child", 5: "child"}
    for j in range(k):
        roles[7 + j] = "extraneous"
    for t in child_topo:
        for u in incoming[t]:
            c = topo_to_col[u]
            if roles[c] == "extraneous":
                roles[c] = "spouse"
    mb = frozenset(c for c, role in roles.items() if role != "extraneous")
    data = DataMatrix(values=values, column_names=_column_names(k))
    truth = MarkovBlanketTruth(target=6, mb=mb, roles=roles)
    return data, truth


def derive_seed(base_seed: int, grid_index: int, trial: int) -> int:
    """Deterministically mix the base seed with grid and trial indices."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(grid_index, trial))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepCell:
    """All trials generated for one grid value."""

    value: float
    seeds: tuple[int, ...]
    datasets: tuple[tuple[DataMatrix, MarkovBlanketTruth], ...]


def _apply_grid_value(cfg: SynthConfig, experiment: str, value: float) -> SynthConfig:
    if experiment in ("samples", "edges", "extraneous"):
        count = int(value)
        if count != value:
            raise ValueError(f"{experiment} grid values must be integers, got {value}")
        field = {"samples": "n_samples", "edges": "extra_edges", "extraneous": "n_extraneous"}
        return replace(cfg, **{field[experiment]: count})
    if experiment == "noise":
        return replace(cfg, noise_sd=float(value))
    return replace(cfg, mb_weight=float(value))


def sweep(
    experiment: str,
    grid,
    base_cfg: SynthConfig,
    trials: int,
    fixed_samples: int = DEFAULT_FIXED_SAMPLES,
) -> list[SweepCell]:
    """Generate `trials` datasets per grid value with derived seeds.

    Every experiment except "samples" holds the row count at fixed_samples.
    """
    if experiment not in EXPERIMENTS:
        raise BadExperimentError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cells = []
    for gi, value in enumerate(grid):
        cfg = base_cfg if experiment == "samples" else replace(base_cfg, n_samples=fixed_samples)
        cfg = _apply_grid_value(cfg, experiment, value)
        seeds = []
        datasets = []
        for t in range(trials):
            seed = derive_seed(base_cfg.seed, gi, t)
            seeds.append(seed)
            datasets.append(gen_mb_dataset(replace(cfg, seed=seed)))
        cells.append(SweepCell(value=float(value), seeds=tuple(seeds), datasets=tuple(datasets)))
    return cells
