"""Evaluation and theory utilities: Rand Index, ensemble-size bound, WCSS/elbow."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .core import ClusterAssignment, Hyperparams, TimeSeriesDataset


def rand_index(a: ClusterAssignment, b: ClusterAssignment) -> float:
    """Fraction of instance pairs on which the two partitions agree.

    A pair agrees when it is co-clustered in both partitions or separated in
    both.  Computed from the contingency table in O(n + k_a * k_b).
    """
    if a.n != b.n:
        raise ValueError(f"partition sizes differ: {a.n} vs {b.n}")
    n = a.n
    if n < 2:
        raise ValueError("Rand Index needs at least 2 instances")
    table = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(table, (a.labels, b.labels), 1)
    same_both = int((table * (table - 1) // 2).sum())
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    same_a = int((rows * (rows - 1) // 2).sum())
    same_b = int((cols * (cols - 1) // 2).sum())
    total = n * (n - 1) // 2
    disagreements = same_a + same_b - 2 * same_both
    return (total - disagreements) / total


def ensemble_size_lower_bound(alpha: float, gamma: float) -> float:
    """Minimum ensemble size -2*ln(alpha) / gamma**2.

    ``1 - alpha`` is the confidence level and ``gamma`` the fraction of
    relevant representations.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    return -2.0 * math.log(alpha) / (gamma * gamma)


def wcss(X: np.ndarray, assignment: ClusterAssignment) -> float:
    """Within-cluster sum of squared distances to the cluster means."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("X must be a non-empty (n, d) matrix")
    if X.shape[0] != assignment.n:
        raise ValueError(f"X has {X.shape[0]} rows but assignment covers {assignment.n}")
    labels = assignment.labels
    sizes = assignment.sizes()
    means = np.zeros((assignment.k, X.shape[1]))
    np.add.at(means, labels, X)
    nonempty = sizes > 0
    means[nonempty] /= sizes[nonempty, None]
    diff = X - means[labels]
    return float(np.einsum("ij,ij->", diff, diff))


_MONOTONE_SLACK = 0.05  # per-step upward wobble allowed, as a fraction of wcss[0]


@dataclass(frozen=True)
class ElbowCurve:
    ks: tuple
    wcss: tuple

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        vals = tuple(float(v) for v in self.wcss)
        if len(ks) != len(vals):
            raise ValueError("ks and wcss must be parallel")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("ks must be strictly ascending")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "wcss", vals)
        step = self.max_upward_step()
        if step > _MONOTONE_SLACK:
            warnings.warn(
                f"wcss rises by {step:.1%} of wcss[0] somewhere along the curve; "
                "expected a (noisily) decreasing curve", stacklevel=2)

    def max_upward_step(self) -> float:
        """Largest one-step wcss increase, as a fraction of wcss[0] (0 if none)."""
        if len(self.wcss) < 2 or self.wcss[0] <= 0:
            return 0.0
        worst = max(b - a for a, b in zip(self.wcss, self.wcss[1:]))
        return max(0.0, worst / self.wcss[0])

    def second_differences(self) -> dict[int, float]:
        """Discrete curvature wcss[i-1] - 2*wcss[i] + wcss[i+1] per interior k."""
        out = {}
        for i in range(1, len(self.ks) - 1):
            out[self.ks[i]] = self.wcss[i - 1] - 2.0 * self.wcss[i] + self.wcss[i + 1]
        return out

    def elbow(self) -> int:
        """k with maximal discrete curvature."""
        diffs = self.second_differences()
        if not diffs:
            raise ValueError("need at least 3 points to locate an elbow")
        return max(diffs, key=lambda k: (diffs[k], -k))


_ELBOW_SAMPLE_BRANCHES = 16


def elbow_feature_space(dataset: TimeSeriesDataset, hp: Hyperparams) -> np.ndarray:
    """Fixed feature space for elbow statistics.

    Concatenated feature matrices of a seeded subsample of 16 branches, each
    scaled to unit overall standard deviation, so every k is scored against
    the same multi-representation space and no single branch's magnitude
    dominates the curve.
    """
    from . import rng
    from .extractor import extract_features, make_block_params
    from .pipeline import ELBOW_STREAM, branch_weight_seed

    gen = rng.generator(rng.branch_seed(hp.master_seed, ELBOW_STREAM))
    count = min(_ELBOW_SAMPLE_BRANCHES, hp.branches)
    picks = sorted(int(p) for p in gen.choice(hp.branches, size=count, replace=False))
    mats = []
    for branch in picks:
        params = make_block_params(branch_weight_seed(hp.master_seed, branch),
                                   dataset.m, hp)
        feats = extract_features(dataset.values, params, pool_size=hp.pool_size)
        spread = feats.std()
        mats.append(feats / spread if spread > 0 else feats)
    return np.hstack(mats)


def elbow_curve(dataset: TimeSeriesDataset, hp: Hyperparams,
                k_range: list[int]) -> ElbowCurve:
    """Run the full pipeline per k and score each consensus on a fixed space."""
    from .pipeline import run

    ks = [int(k) for k in k_range]
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_range must be strictly ascending")
    if ks[-1] > dataset.n:
        raise ValueError(f"max k {ks[-1]} exceeds n={dataset.n}")
    X = elbow_feature_space(dataset, hp)
    values = []
    for k in ks:
        report = run(dataset, replace(hp, k=k))
        values.append(wcss(X, report.assignment))
    return ElbowCurve(ks=tuple(ks), wcss=tuple(values))
