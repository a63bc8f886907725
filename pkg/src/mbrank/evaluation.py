"""Scoring of rankings and subsets against a known blanket.

Rank normalization walks the ranking from the most important end and gives
a contiguous run of blanket members a shared rank, so a perfect ranking
scores a mean blanket rank of 1 regardless of blanket size. Subset quality
is the Jaccard overlap with the true blanket, scaled to [0, 100].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .elimination import EliminationResult, SubsetResult
from .errors import (
    BadKError,
    BadOrderError,
    EmptyTruthError,
    TooFewTrialsError,
    UndefinedScoreError,
)
from .synth import MarkovBlanketTruth


@dataclass(frozen=True)
class NormalizedRanking:
    """Per-variable normalized ranks and the blanket's mean rank."""

    ranks: Mapping[int, int]
    mean_mb_rank: float


@dataclass(frozen=True)
class TrialSummary:
    """Aggregate of one metric over the trials at a single grid value."""

    grid_value: float
    scores: tuple[float, ...]
    mean: float
    ci95_half_width: float


def normalize_ranks(
    elim_order_ascending: Sequence[int], truth: MarkovBlanketTruth
) -> NormalizedRanking:
    """Normalized ranks for an ascending elimination order.

    Walking from the last-eliminated (most important) variable, the first
    gets rank 1 and each next variable keeps its predecessor's rank only
    when both are blanket members; every other step increments the rank.
    """
    mb = truth.mb
    if not mb:
        raise EmptyTruthError("ground-truth blanket is empty")
    order = [int(v) for v in elim_order_ascending]
    if len(set(order)) != len(order):
        raise BadOrderError("elimination order contains duplicates")
    if truth.target in order:
        raise BadOrderError("elimination order contains the target")
    if not mb <= set(order):
        missing = sorted(mb - set(order))
        raise BadOrderError(f"elimination order is missing blanket members {missing}")

    ranks: dict[int, int] = {}
    rank = 0
    prev_in_mb = False
    for i, v in enumerate(reversed(order)):
        in_mb = v in mb
        if i == 0:
            rank = 1
        elif not (in_mb and prev_in_mb):
            rank += 1
        ranks[v] = rank
        prev_in_mb = in_mb
    mean_mb = sum(ranks[v] for v in mb) / len(mb)
    return NormalizedRanking(ranks=ranks, mean_mb_rank=mean_mb)


def clip_ranking(result: EliminationResult, k: int) -> SubsetResult:
    """The k most important variables of a ranking.

    Backward rankings keep the last k eliminated; forward rankings keep the
    first k selected.
    """
    if not 1 <= k <= len(result.order):
        raise BadKError(f"k must be in [1, {len(result.order)}], got {k}")
    if result.direction == "backward":
        members = result.order[-k:]
    else:
        members = result.order[:k]
    return SubsetResult(members=frozenset(members))


def accuracy(subset: SubsetResult, truth: MarkovBlanketTruth) -> float:
    """Jaccard overlap of the subset with the true blanket, times 100."""
    members = set(subset.members)
    mb = set(truth.mb)
    union = members | mb
    if not union:
        raise UndefinedScoreError("accuracy of two empty sets is undefined")
    return len(members & mb) / len(union) * 100.0


def aggregate(scores: Sequence[float]) -> tuple[float, float]:
    """Mean and normal-approximation 95% CI half-width of the scores."""
    scores = [float(s) for s in scores]
    m = len(scores)
    if m < 2:
        raise TooFewTrialsError(f"need at least 2 scores, got {m}")
    mean = sum(scores) / m
    var = sum((s - mean) ** 2 for s in scores) / (m - 1)
    half_width = 1.96 * math.sqrt(var) / math.sqrt(m)
    return mean, half_width
