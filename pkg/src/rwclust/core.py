"""Shared domain types: datasets, cluster assignments, ensembles, hyperparameters.

All types are immutable after construction (arrays are frozen with
``writeable = False``) and safe to share across concurrent branch workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.base is not None or arr.flags.writeable:
        arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeriesDataset:
    """n labeled real-valued series of uniform length m.

    ``values`` is the (n, m) matrix; each row is one series.  ``labels``,
    when present, holds 0-based integer class ids.  ``label_values`` keeps
    the original file labels (sorted) for reporting.
    """

    values: np.ndarray
    labels: np.ndarray | None = None
    name: str = ""
    label_values: tuple = ()

    def __post_init__(self):
        values = _frozen_array(self.values, np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"values must be a non-empty (n, m) matrix, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise ValueError("series values must all be finite")
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = _frozen_array(self.labels, np.int64)
            if labels.shape != (values.shape[0],):
                raise ValueError(
                    f"labels length {labels.shape} does not match n={values.shape[0]}")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            raise ValueError(f"dataset {self.name!r} has no ground-truth labels")
        return int(np.unique(self.labels).size)


@dataclass(frozen=True)
class ClusterAssignment:
    """A partition of n instances into (at most) k groups.

    ``k`` is the declared arity: every label lies in [0, k) but clusters may
    be empty.
    """

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = _frozen_array(self.labels, np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a non-empty 1-D sequence")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if labels.min() < 0 or labels.max() >= self.k:
            raise ValueError(f"labels must lie in [0, {self.k})")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        """Cluster sizes, length k (empty clusters report 0)."""
        return np.bincount(self.labels, minlength=self.k)

    def to_line(self) -> str:
        """Serialize as ``k:l0,l1,...`` (lossless; see from_line)."""
        return f"{self.k}:" + ",".join(str(int(v)) for v in self.labels)

    @classmethod
    def from_line(cls, line: str) -> "ClusterAssignment":
        head, _, body = line.strip().partition(":")
        if not body:
            raise ValueError(f"malformed assignment line: {line!r}")
        labels = np.array([int(v) for v in body.split(",")], dtype=np.int64)
        return cls(labels=labels, k=int(head))


@dataclass(frozen=True)
class ClusteringEnsemble:
    """Ordered branch clusterings plus their violation scores."""

    clusterings: tuple
    violations: tuple

    def __post_init__(self):
        clusterings = tuple(self.clusterings)
        violations = tuple(float(v) for v in self.violations)
        if len(clusterings) != len(violations):
            raise ValueError("clusterings and violations must have equal length")
        object.__setattr__(self, "clusterings", clusterings)
        object.__setattr__(self, "violations", violations)

    def __len__(self) -> int:
        return len(self.clusterings)

    def extend(self, other: "ClusteringEnsemble") -> "ClusteringEnsemble":
        return ClusteringEnsemble(self.clusterings + other.clusterings,
                                  self.violations + other.violations)


@dataclass(frozen=True)
class Hyperparams:
    """Run configuration: ensemble size, selection bounds, architecture constants.

    The size bounds used by selection are ``lower_mult * acs`` and
    ``upper_mult * acs`` where acs = round(n / k) is computed per run; the
    bounds stay real-valued (never truncated to integers).
    """

    k: int
    branches: int = 800
    sr: float = 0.1
    lower_mult: float = 0.3
    upper_mult: float = 1.5
    master_seed: int = 42
    filters: int = 8
    kernel_size: int = 3
    pool_size: int = 2
    lstm_units: int = 8
    kmeans_n_init: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.branches < 1:
            raise ValueError(f"branches must be >= 1, got {self.branches}")
        if not (0.0 < self.sr <= 1.0):
            raise ValueError(f"sr must lie in (0, 1], got {self.sr}")
        if not self.lower_mult < self.upper_mult:
            raise ValueError(
                f"lower_mult must be < upper_mult, got {self.lower_mult} >= {self.upper_mult}")
        if self.sr * self.branches < 1.0:
            raise ValueError(
                f"sr * branches must be >= 1, got {self.sr * self.branches}")
        for name in ("filters", "kernel_size", "pool_size", "lstm_units", "kmeans_n_init"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def bounds(self, n: int) -> tuple[float, float]:
        """(lower, upper) cluster-size bounds for a dataset of n instances."""
        acs = average_cluster_size(n, self.k)
        return self.lower_mult * acs, self.upper_mult * acs


def average_cluster_size(n: int, k: int) -> int:
    """round(n / k), half away from zero, never below 1."""
    if n <= 0 or k <= 0:
        raise ValueError(f"n and k must be positive, got n={n}, k={k}")
    q, r = divmod(n, k)
    return max(1, q + (1 if 2 * r >= k else 0))
