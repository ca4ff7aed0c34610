"""Cluster-size violation scoring and survivor selection.

A clustering is penalized by the total amount its cluster sizes fall below
the lower bound or exceed the upper bound.  The ensemble keeps the top
S = max(zv, round(sr * B)) clusterings by ascending violations, where zv is
the number of zero-violation clusterings; ties keep branch order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ClusterAssignment, ClusteringEnsemble, average_cluster_size


@dataclass(frozen=True)
class SelectionConfig:
    lr: float
    ur: float
    sr: float
    B: int

    def __post_init__(self):
        if not 0 < self.lr < self.ur:
            raise ValueError(f"need 0 < lr < ur, got lr={self.lr}, ur={self.ur}")
        if not (0.0 < self.sr <= 1.0):
            raise ValueError(f"sr must lie in (0, 1], got {self.sr}")
        if self.B < 1:
            raise ValueError(f"B must be >= 1, got {self.B}")


def count_violations(assignment: ClusterAssignment, lr: float, ur: float) -> float:
    """Total size-bound excess over all k declared clusters (empty ones count)."""
    sizes = assignment.sizes().astype(np.float64)
    over = np.clip(sizes - ur, 0.0, None)
    under = np.clip(lr - sizes, 0.0, None)
    return float(over.sum() + under.sum())


def effective_size(violations, cfg: SelectionConfig) -> int:
    """S = max(zv, round(sr*B)), clamped to [1, len(violations)]."""
    v = np.asarray(violations, dtype=np.float64)
    zv = int((v == 0.0).sum())
    quota = max(1, _round_half_up(cfg.sr * cfg.B))
    return min(max(zv, quota, 1), v.size)


def select(ensemble: ClusteringEnsemble, cfg: SelectionConfig) -> list[ClusterAssignment]:
    """Top-S clusterings by ascending violations (stable in branch order)."""
    if len(ensemble) == 0:
        raise ValueError("cannot select from an empty ensemble")
    violations = np.array(
        [count_violations(c, cfg.lr, cfg.ur) for c in ensemble.clusterings])
    s = effective_size(violations, cfg)
    order = np.argsort(violations, kind="stable")
    return [ensemble.clusterings[i] for i in order[:s]]


def bounds_for(n: int, k: int, lower_mult: float, upper_mult: float) -> tuple[float, float]:
    """Real-valued (lr, ur) from the average cluster size round(n/k)."""
    acs = average_cluster_size(n, k)
    return lower_mult * acs, upper_mult * acs


def _round_half_up(x: float) -> int:
    # round half away from zero; x is non-negative here
    return int(np.floor(x + 0.5))
