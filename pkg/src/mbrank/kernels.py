"""Gram matrix construction, centering, and bandwidth selection.

All values are immutable after construction, so they can be shared freely
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import AlreadyCenteredError, EmptySubsetError

KERNEL_FAMILIES = ("linear", "gaussian")
COLUMN_KINDS = ("continuous", "discrete")

_SYMMETRY_RTOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DataMatrix:
    """n x d matrix of samples (rows) by variables (columns).

    Args:
        values: (n, d) real matrix, n >= 2, d >= 1, all finite.
        column_names: d unique names.
        column_kinds: d markers, "continuous" or "discrete" (integer-coded).
            Defaults to all continuous.
    """

    values: np.ndarray
    column_names: tuple[str, ...]
    column_kinds: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {values.shape}")
        n, d = values.shape
        if n < 2:
            raise ValueError(f"need at least 2 samples, got {n}")
        if d < 1:
            raise ValueError("need at least 1 column")
        if not np.all(np.isfinite(values)):
            raise ValueError("values contain NaN or infinity")
        names = tuple(str(c) for c in self.column_names)
        if len(names) != d:
            raise ValueError(f"got {len(names)} column names for {d} columns")
        if len(set(names)) != d:
            raise ValueError("column names are not unique")
        kinds = tuple(self.column_kinds) or ("continuous",) * d
        if len(kinds) != d:
            raise ValueError(f"got {len(kinds)} column kinds for {d} columns")
        for k in kinds:
            if k not in COLUMN_KINDS:
                raise ValueError(f"unknown column kind {k!r}")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "column_kinds", kinds)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    def index_of(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters shared by all Gram computations.

    sigma=None selects the median-distance heuristic, resolved over exactly
    the columns a Gram matrix is built from. epsilon is the ridge term used
    by the conditional dependence measures.
    """

    family: str = "gaussian"
    sigma: float | None = None
    epsilon: float = 1e-3

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric n x n kernel matrix with a flag recording centering."""

    entries: np.ndarray
    centered: bool = False

    def __post_init__(self):
        k = np.asarray(self.entries, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {k.shape}")
        scale = float(np.abs(k).max()) if k.size else 0.0
        if float(np.abs(k - k.T).max()) > _SYMMETRY_RTOL * max(scale, 1.0):
            raise ValueError("Gram matrix is not symmetric")
        object.__setattr__(self, "entries", _frozen(k))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _validate_columns(data: DataMatrix, columns: Iterable[int]) -> tuple[int, ...]:
    cols = sorted(set(int(c) for c in columns))
    if not cols:
        raise EmptySubsetError("column set is empty")
    if cols[0] < 0 or cols[-1] >= data.n_columns:
        raise IndexError(f"column indices {cols} out of range for d={data.n_columns}")
    return tuple(cols)


def _sq_dists(values: np.ndarray, cols: tuple[int, ...]) -> np.ndarray:
    """Pairwise squared Euclidean distances over the selected columns.

    Accumulated column by column so identical rows give exactly 0.0.
    """
    n = values.shape[0]
    d2 = np.zeros((n, n))
    for c in cols:
        u = values[:, c]
        diff = u[:, None] - u[None, :]
        d2 += diff * diff
    return d2


def _median_sigma(d2: np.ndarray) -> float:
    n = d2.shape[0]
    iu = np.triu_indices(n, k=1)
    dists = np.sqrt(d2[iu])
    dists = dists[dists > 0.0]
    if dists.size == 0:
        # all points identical: fall back to a unit bandwidth
        return 1.0
    return float(np.median(dists))


def median_bandwidth(data: DataMatrix, columns: Iterable[int]) -> float:
    """Median of the strictly positive pairwise distances over `columns`.

    An even count of distances averages the two middle values. If every
    pairwise distance is zero (constant data) the fallback is 1.0.
    """
    cols = _validate_columns(data, columns)
    return _median_sigma(_sq_dists(data.values, cols))


def compute_gram(data: DataMatrix, columns: Iterable[int], spec: KernelSpec) -> GramMatrix:
    """Uncentered Gram matrix over the joint sample vectors restricted to `columns`.

    linear: K[i, j] = <x_i, x_j>; gaussian: K[i, j] = exp(-||x_i - x_j||^2 / (2 sigma^2))
    with sigma taken from the spec or resolved by the median heuristic over
    exactly these columns.
    """
    cols = _validate_columns(data, columns)
    if spec.family == "linear":
        sub = data.values[:, cols]
        k = sub @ sub.T
    else:
        d2 = _sq_dists(data.values, cols)
        sigma = spec.sigma if spec.sigma is not None else _median_sigma(d2)
        k = np.exp(-d2 / (2.0 * sigma * sigma))
    return GramMatrix(entries=k, centered=False)


def center(gram: GramMatrix) -> GramMatrix:
    """Double-center a Gram matrix: H K H with H = I - (1/n) 11^T."""
    if gram.centered:
        raise AlreadyCenteredError("Gram matrix is already centered")
    k = gram.entries
    row_means = k.mean(axis=0)
    centered = k - row_means[None, :] - row_means[:, None] + row_means.mean()
    return GramMatrix(entries=centered, centered=True)
