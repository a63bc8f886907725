"""Kernel dependence measures computed from centered Gram matrices.

Two conditional measures and one unconditional one:

  m1(G_Y, G_XS)  = tr(G_Y (G_XS + n*eps*I)^-1)
  m2(G_Y, G_XS)  = tr(T G_Y T),  T = eps * (G_XS + eps*I)^-1
  hsic(G_X, G_Y) = tr(G_X G_Y) / (n - 1)^2

Lower m1/m2 means Y is closer to conditionally independent of everything
else given the conditioning set; larger hsic means more marginal dependence.
An empty conditioning set is the regularized no-information limit:
G_XS = 0 for m1 (giving tr(G_Y) / (n*eps)) and T = I for m2 (giving tr(G_Y)).
"""

from __future__ import annotations

import enum
from typing import Iterable

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from threadpoolctl import threadpool_limits

from .errors import DimensionMismatchError, NotCenteredError
from .kernels import DataMatrix, GramMatrix, KernelSpec, center, compute_gram


class MeasureKind(enum.Enum):
    """Selector for the dependence measure driving an elimination run."""

    M1 = "m1"
    M2 = "m2"
    HSIC = "hsic"


def _check_pair(g_a: GramMatrix, g_b: GramMatrix | None) -> None:
    if not g_a.centered:
        raise NotCenteredError("Gram matrix is not centered")
    if g_b is None:
        return
    if not g_b.centered:
        raise NotCenteredError("Gram matrix is not centered")
    if g_a.n != g_b.n:
        raise DimensionMismatchError(f"Gram sizes differ: {g_a.n} vs {g_b.n}")


def m1(g_y: GramMatrix, g_xs: GramMatrix | None, epsilon: float) -> float:
    """Ridge-inverted conditional dependence trace.

    g_xs=None stands for the empty conditioning set.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    _check_pair(g_y, g_xs)
    n = g_y.n
    if g_xs is None:
        return float(np.trace(g_y.entries)) / (n * epsilon)
    a = g_xs.entries + (n * epsilon) * np.eye(n)
    factor = cho_factor(a, lower=True, check_finite=False)
    return float(np.trace(cho_solve(factor, g_y.entries, check_finite=False)))


def m2(g_y: GramMatrix, g_xs: GramMatrix | None, epsilon: float) -> float:
    """Shrinkage-operator conditional dependence trace.

    g_xs=None stands for the empty conditioning set (T = I).
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    _check_pair(g_y, g_xs)
    n = g_y.n
    if g_xs is None:
        return float(np.trace(g_y.entries))
    a = g_xs.entries + epsilon * np.eye(n)
    factor = cho_factor(a, lower=True, check_finite=False)
    # tr(T G_Y T) = eps^2 tr(W W G_Y) with W = (G_XS + eps I)^-1
    z = cho_solve(factor, g_y.entries, check_finite=False)
    z = cho_solve(factor, z, check_finite=False)
    return float(epsilon * epsilon * np.trace(z))


def hsic(g_x: GramMatrix, g_y: GramMatrix) -> float:
    """Biased dependence estimator tr(G_X G_Y) / (n - 1)^2 on centered Grams."""
    _check_pair(g_x, g_y)
    n = g_x.n
    return float(np.sum(g_x.entries * g_y.entries)) / ((n - 1) ** 2)


def target_gram(data: DataMatrix, target: int, spec: KernelSpec) -> GramMatrix:
    """Centered Gram of the target column alone."""
    return center(compute_gram(data, (target,), spec))


def conditioning_gram(
    data: DataMatrix, conditioning: Iterable[int], spec: KernelSpec
) -> GramMatrix | None:
    """Centered Gram of the conditioning columns; None for the empty set."""
    cond = tuple(conditioning)
    if not cond:
        return None
    return center(compute_gram(data, cond, spec))


def measure_from_grams(
    kind: MeasureKind, g_y: GramMatrix, g_xs: GramMatrix | None, epsilon: float
) -> float:
    """Apply the selected measure to prebuilt centered Grams.

    g_xs=None is the empty conditioning/feature set; under HSIC that is a
    zero-information Gram, so the value is 0.0.
    """
    if kind is MeasureKind.HSIC:
        return 0.0 if g_xs is None else hsic(g_xs, g_y)
    if kind is MeasureKind.M1:
        return m1(g_y, g_xs, epsilon)
    if kind is MeasureKind.M2:
        return m2(g_y, g_xs, epsilon)
    raise ValueError(f"unknown measure kind {kind!r}")


def evaluate(
    kind: MeasureKind,
    data: DataMatrix,
    target: int,
    conditioning: Iterable[int],
    spec: KernelSpec,
) -> float:
    """Build the Grams for the target and the conditioning set and apply `kind`.

    For HSIC the "conditioning" indices are the candidate feature set paired
    against the target; an empty set yields 0.0.
    """
    target = int(target)
    if not 0 <= target < data.n_columns:
        raise IndexError(f"target index {target} out of range")
    cond = sorted(set(int(c) for c in conditioning))
    if target in cond:
        raise ValueError(f"target {target} must not be in the conditioning set")
    # pinned to one BLAS thread so values are bit-identical with the
    # elimination loops regardless of the ambient thread configuration
    with threadpool_limits(limits=1):
        g_y = target_gram(data, target, spec)
        return measure_from_grams(kind, g_y, conditioning_gram(data, cond, spec), spec.epsilon)
