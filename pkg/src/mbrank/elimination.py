"""Feature ranking and blanket discovery algorithms.

backward_eliminate repeatedly tests each remaining variable by holding it
out of the conditioning set and permanently removes the one whose absence
minimizes the conditional dependence measure, so variables that matter for
the target survive longest. The output lists variables in elimination
order: first eliminated = least important. forward_select is the greedy
mirror image, bahsic_eliminate is the marginal-dependence baseline, and
iamb is the grow/shrink partial-correlation baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm
from threadpoolctl import threadpool_limits

from .errors import (
    BadTargetError,
    SingularConditioningError,
    TooFewSamplesError,
)
from .kernels import DataMatrix, KernelSpec
from .measures import MeasureKind, conditioning_gram, measure_from_grams, target_gram


@dataclass(frozen=True)
class EliminationResult:
    """Variable indices in elimination/selection order plus per-step values.

    direction="backward": order[0] was eliminated first (least important).
    direction="forward": order[0] was selected first (most important).
    """

    order: tuple[int, ...]
    step_values: tuple[float, ...]
    direction: str

    def __post_init__(self):
        if self.direction not in ("backward", "forward"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if len(self.order) != len(self.step_values):
            raise ValueError("order and step_values must have equal length")


@dataclass(frozen=True)
class SubsetResult:
    """An unordered set of selected variable indices."""

    members: frozenset[int]


def _non_target_indices(data: DataMatrix, target: int) -> list[int]:
    if not 0 <= target < data.n_columns:
        raise BadTargetError(f"target index {target} out of range for d={data.n_columns}")
    return [j for j in range(data.n_columns) if j != target]


def _conditional_kind(kind: MeasureKind) -> MeasureKind:
    if kind not in (MeasureKind.M1, MeasureKind.M2):
        raise ValueError(f"need a conditional measure, got {kind!r}")
    return kind


def backward_eliminate(
    data: DataMatrix,
    target: int,
    kind: MeasureKind,
    spec: KernelSpec,
    batch_fraction: float = 0.0,
) -> EliminationResult:
    """Rank all non-target variables by backward elimination.

    Per iteration every remaining variable is held out of the conditioning
    set in turn and the measure is evaluated on the rest; with
    batch_fraction=0 the single variable with the smallest held-out value is
    removed, otherwise the ceil((1 - batch_fraction) * |remaining|) smallest
    are removed at once (the surviving fraction is batch_fraction). Ties go
    to the lowest variable index. A median-heuristic bandwidth is re-resolved
    from the columns of each evaluated subset.
    """
    kind = _conditional_kind(kind)
    target = int(target)
    if not 0.0 <= batch_fraction < 1.0:
        raise ValueError(f"batch_fraction must be in [0, 1), got {batch_fraction}")
    remaining = _non_target_indices(data, target)
    if not remaining:
        raise BadTargetError("no non-target variables to rank")
    order: list[int] = []
    values: list[float] = []
    # many small factorizations: multithreaded BLAS only slows these down
    with threadpool_limits(limits=1):
        g_y = target_gram(data, target, spec)
        while remaining:
            held_out = []
            for v in remaining:
                subset = [u for u in remaining if u != v]
                g_xs = conditioning_gram(data, subset, spec)
                held_out.append((measure_from_grams(kind, g_y, g_xs, spec.epsilon), v))
            held_out.sort(key=lambda t: (t[0], t[1]))
            if batch_fraction == 0.0:
                n_remove = 1
            else:
                n_remove = math.ceil((1.0 - batch_fraction) * len(remaining))
            for val, v in held_out[:n_remove]:
                remaining.remove(v)
                order.append(v)
                values.append(val)
    return EliminationResult(order=tuple(order), step_values=tuple(values), direction="backward")


def forward_select(
    data: DataMatrix,
    target: int,
    kind: MeasureKind,
    spec: KernelSpec,
    stop_at: int | None = None,
) -> EliminationResult:
    """Greedily grow the conditioning set, most informative variable first.

    Each step adds the candidate whose inclusion minimizes the measure;
    stop_at=None selects every variable, otherwise selection stops after
    stop_at additions.
    """
    kind = _conditional_kind(kind)
    target = int(target)
    remaining = _non_target_indices(data, target)
    if not remaining:
        raise BadTargetError("no non-target variables to rank")
    if stop_at is None:
        stop_at = len(remaining)
    if not 1 <= stop_at <= len(remaining):
        raise ValueError(f"stop_at must be in [1, {len(remaining)}], got {stop_at}")
    selected: list[int] = []
    values: list[float] = []
    with threadpool_limits(limits=1):
        g_y = target_gram(data, target, spec)
        while remaining and len(selected) < stop_at:
            candidates = []
            for v in remaining:
                g_xs = conditioning_gram(data, selected + [v], spec)
                candidates.append((measure_from_grams(kind, g_y, g_xs, spec.epsilon), v))
            candidates.sort(key=lambda t: (t[0], t[1]))
            val, v = candidates[0]
            remaining.remove(v)
            selected.append(v)
            values.append(val)
    return EliminationResult(order=tuple(selected), step_values=tuple(values), direction="forward")


def bahsic_eliminate(data: DataMatrix, target: int, spec: KernelSpec) -> EliminationResult:
    """Backward elimination keeping the feature set with maximal dependence.

    Per iteration the variable whose removal from the feature kernel
    maximizes hsic(features, target) is dropped, so weakly associated
    variables go first. Output contract matches backward_eliminate.
    """
    target = int(target)
    remaining = _non_target_indices(data, target)
    if not remaining:
        raise BadTargetError("no non-target variables to rank")
    order: list[int] = []
    values: list[float] = []
    with threadpool_limits(limits=1):
        g_y = target_gram(data, target, spec)
        while remaining:
            held_out = []
            for v in remaining:
                subset = [u for u in remaining if u != v]
                g_xs = conditioning_gram(data, subset, spec)
                held_out.append((measure_from_grams(MeasureKind.HSIC, g_y, g_xs, spec.epsilon), v))
            held_out.sort(key=lambda t: (-t[0], t[1]))
            val, v = held_out[0]
            remaining.remove(v)
            order.append(v)
            values.append(val)
    return EliminationResult(order=tuple(order), step_values=tuple(values), direction="backward")


@dataclass(frozen=True)
class FisherZ:
    """Fisher Z statistic for a (partial) correlation."""

    statistic: float

    def significant_at(self, alpha: float) -> bool:
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {alpha}")
        return abs(self.statistic) > norm.ppf(1.0 - alpha / 2.0)


def fisher_z(partial_corr: float, n: int, cond_size: int) -> FisherZ:
    """z = atanh(r) * sqrt(n - cond_size - 3), requiring n - cond_size - 3 > 0."""
    df = n - cond_size - 3
    if df <= 0:
        raise TooFewSamplesError(f"need n - cond_size - 3 > 0, got {df}")
    if not -1.0 < partial_corr < 1.0:
        raise ValueError(f"partial correlation must be in (-1, 1), got {partial_corr}")
    z = 0.5 * math.log((1.0 + partial_corr) / (1.0 - partial_corr)) * math.sqrt(df)
    return FisherZ(statistic=z)


def partial_correlation(corr: np.ndarray, i: int, j: int, conditioning: Sequence[int]) -> float:
    """Partial correlation of variables i and j given `conditioning`.

    Computed from the precision of the corresponding correlation submatrix.
    Raises SingularConditioningError when that submatrix cannot be inverted
    or yields a degenerate result.
    """
    idx = [i, j] + [c for c in conditioning]
    sub = corr[np.ix_(idx, idx)]
    if not np.all(np.isfinite(sub)):
        raise SingularConditioningError("correlation submatrix has non-finite entries")
    try:
        precision = np.linalg.inv(sub)
    except np.linalg.LinAlgError as exc:
        raise SingularConditioningError("correlation submatrix is singular") from exc
    denom = precision[0, 0] * precision[1, 1]
    if not np.isfinite(denom) or denom <= 0:
        raise SingularConditioningError("degenerate precision for partial correlation")
    r = float(-precision[0, 1] / math.sqrt(denom))
    if not math.isfinite(r):
        raise SingularConditioningError("partial correlation is not finite")
    return r


# keep Fisher Z inputs strictly inside (-1, 1)
_CORR_CLIP = 1.0 - 1e-12


def _significant_association(corr, i, j, conditioning, n, alpha) -> tuple[float, bool]:
    """(|partial correlation|, significance); singular or untestable -> independent."""
    try:
        r = partial_correlation(corr, i, j, conditioning)
    except SingularConditioningError:
        return 0.0, False
    r_clipped = max(-_CORR_CLIP, min(_CORR_CLIP, r))
    try:
        test = fisher_z(r_clipped, n, len(conditioning))
    except TooFewSamplesError:
        return abs(r), False
    return abs(r), test.significant_at(alpha)


def iamb(data: DataMatrix, target: int, alpha: float = 0.05) -> SubsetResult:
    """Grow/shrink blanket discovery with Fisher Z partial-correlation tests.

    The grow phase repeatedly admits the candidate with the strongest
    partial correlation to the target given the current set, provided it is
    significant at alpha; the shrink phase drops any member rendered
    non-significant given the rest. The two phases alternate until neither
    changes the set. Singular conditioning is treated as independence.
    """
    target = int(target)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    others = _non_target_indices(data, target)
    if not others:
        return SubsetResult(members=frozenset())
    n = data.n_samples
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.corrcoef(data.values, rowvar=False)
    members: list[int] = []

    for _ in range(len(others) * len(others) + 1):
        changed = False
        # grow: best-scoring significant candidate, lowest index on ties
        best: tuple[float, int] | None = None
        for v in others:
            if v in members:
                continue
            score, significant = _significant_association(corr, v, target, members, n, alpha)
            if significant and (best is None or (-score, v) < (-best[0], best[1])):
                best = (score, v)
        if best is not None:
            members.append(best[1])
            changed = True
        else:
            # shrink: first member no longer significant given the rest
            for v in sorted(members):
                rest = [u for u in members if u != v]
                _, significant = _significant_association(corr, v, target, rest, n, alpha)
                if not significant:
                    members.remove(v)
                    changed = True
                    break
        if not changed:
            break
    return SubsetResult(members=frozenset(members))
