"""Lloyd's k-means with k-means++ seeding.

Used per branch on extracted features and again inside the spectral
consensus embedding.  Matches the usual library defaults: n_init=10,
max_iter=300, tol=1e-4 relative to the mean per-feature variance.
Assignment ties break toward the lowest centroid index; empty clusters are
repaired by reseeding them on the point currently farthest from its
centroid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import rng
from .core import ClusterAssignment


@dataclass(frozen=True)
class KmeansConfig:
    k: int
    n_init: int = 10
    max_iter: int = 300
    tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.n_init < 1 or self.max_iter < 1:
            raise ValueError("n_init and max_iter must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")


@dataclass(frozen=True)
class KmeansResult:
    assignment: ClusterAssignment
    centroids: np.ndarray
    inertia: float
    inertia_trace: tuple = field(default=(), compare=False)


def kmeans_pp_init(X: np.ndarray, k: int, seed: int) -> np.ndarray:
    """k-means++ (D^2) seeding: k rows of X chosen as starting centroids."""
    n = X.shape[0]
    if n < k:
        raise ValueError(f"need at least k={k} rows, got {n}")
    gen = rng.generator(seed)
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[gen.integers(n)]
    if k == 1:
        return centers
    d2 = cdist(X, centers[:1], "sqeuclidean")[:, 0]
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = gen.choice(n, p=d2 / total)
        else:
            idx = gen.integers(n)  # all remaining points coincide with chosen centers
        centers[j] = X[idx]
        d2 = np.minimum(d2, cdist(X, centers[j: j + 1], "sqeuclidean")[:, 0])
    return centers


def _repair_empty(X, labels, centers, sizes):
    # Reseed each empty cluster on the point farthest from its centroid,
    # never stealing the last member of another cluster.
    for empty in np.flatnonzero(sizes == 0):
        dist = np.einsum("ij,ij->i", X - centers[labels], X - centers[labels])
        dist[sizes[labels] <= 1] = -1.0
        donor = int(np.argmax(dist))
        sizes[labels[donor]] -= 1
        labels[donor] = empty
        sizes[empty] = 1
        centers[empty] = X[donor]
    return labels, centers, sizes


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int, tol_abs: float):
    k = centers.shape[0]
    trace = []
    labels = None
    for _ in range(max_iter):
        d2 = cdist(X, centers, "sqeuclidean")
        labels = d2.argmin(axis=1)
        sizes = np.bincount(labels, minlength=k)
        if (sizes == 0).any():
            labels, centers, sizes = _repair_empty(X, labels, centers.copy(), sizes)
        diff = X - centers[labels]
        trace.append(float(np.einsum("ij,ij->", diff, diff)))
        new_centers = np.zeros_like(centers)
        np.add.at(new_centers, labels, X)
        new_centers /= sizes[:, None]
        shift = float(((new_centers - centers) ** 2).sum())
        centers = new_centers
        if shift <= tol_abs:
            break
    # final assignment consistent with the converged centers
    d2 = cdist(X, centers, "sqeuclidean")
    labels = d2.argmin(axis=1)
    sizes = np.bincount(labels, minlength=k)
    if (sizes == 0).any():
        labels, centers, sizes = _repair_empty(X, labels, centers.copy(), sizes)
    diff = X - centers[labels]
    trace.append(float(np.einsum("ij,ij->", diff, diff)))
    return labels, centers, trace[-1], trace


def kmeans_fit(X: np.ndarray, cfg: KmeansConfig) -> KmeansResult:
    """Best of ``cfg.n_init`` seeded k-means++ / Lloyd runs (lowest inertia)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be an (n, d) matrix")
    if not np.isfinite(X).all():
        raise ValueError("X must be finite")
    n = X.shape[0]
    if n < cfg.k:
        raise ValueError(f"need at least k={cfg.k} rows, got {n}")
    tol_abs = cfg.tol * float(np.mean(np.var(X, axis=0)))
    best = None
    for run in range(cfg.n_init):
        centers0 = kmeans_pp_init(X, cfg.k, rng.branch_seed(cfg.seed, run))
        labels, centers, inertia, trace = _lloyd(X, centers0, cfg.max_iter, tol_abs)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia, trace)
    labels, centers, inertia, trace = best
    return KmeansResult(
        assignment=ClusterAssignment(labels=labels, k=cfg.k),
        centroids=centers,
        inertia=inertia,
        inertia_trace=tuple(trace),
    )
