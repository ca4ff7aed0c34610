"""Consensus clustering by bipartite-graph partitioning.

The selected clusterings define a bipartite graph: instances on one side,
every non-empty cluster of every selected clustering on the other, an edge
wherever an instance belongs to a cluster.  The graph is partitioned
spectrally: normalize the incidence matrix by row/column degrees, take the
top-k left singular subspace, row-normalize, and k-means the instance
embedding into k consensus groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import rng
from .core import ClusterAssignment
from .kmeans import KmeansConfig, kmeans_fit

_SVD_MAX_ITER = 300
_SVD_TOL = 1e-8


@dataclass(frozen=True)
class BipartiteGraph:
    """Instance-cluster incidence for a set of selected clusterings."""

    n_instances: int
    cluster_vertices: tuple  # (clustering index, cluster id) per column
    incidence: sp.csr_matrix  # (n_instances, n_cluster_vertices), binary

    @property
    def n_clusters_total(self) -> int:
        return len(self.cluster_vertices)


def build_bipartite(selected: list[ClusterAssignment]) -> BipartiteGraph:
    """Incidence matrix over all non-empty clusters of ``selected``."""
    if not selected:
        raise ValueError("need at least one clustering")
    n = selected[0].n
    if any(c.n != n for c in selected):
        raise ValueError("all clusterings must cover the same instances")
    vertices = []
    col_blocks = []
    offset = 0
    for ci, clustering in enumerate(selected):
        sizes = clustering.sizes()
        keep = np.flatnonzero(sizes > 0)
        remap = np.full(clustering.k, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        col_blocks.append(remap[clustering.labels] + offset)
        vertices.extend((ci, int(c)) for c in keep)
        offset += keep.size
    rows = np.tile(np.arange(n), len(selected))
    cols = np.concatenate(col_blocks)
    data = np.ones(rows.size, dtype=np.float64)
    flat_vertices = tuple(vertices)
    A = sp.csr_matrix((data, (rows, cols)), shape=(n, len(flat_vertices)))
    A.sum_duplicates()
    A.sort_indices()
    return BipartiteGraph(n_instances=n, cluster_vertices=flat_vertices, incidence=A)


def _normalized_incidence(A: sp.csr_matrix) -> sp.csr_matrix:
    row_deg = np.asarray(A.sum(axis=1)).ravel()
    col_deg = np.asarray(A.sum(axis=0)).ravel()
    with np.errstate(divide="ignore"):
        r = np.where(row_deg > 0, 1.0 / np.sqrt(row_deg), 0.0)
        c = np.where(col_deg > 0, 1.0 / np.sqrt(col_deg), 0.0)
    return sp.diags(r) @ A @ sp.diags(c)


def _top_left_singular(Z: sp.csr_matrix, k: int, seed: int) -> np.ndarray:
    """Orthonormal basis of the top-k left singular subspace of Z.

    Subspace iteration on Z Z^T kept as two sparse products per sweep, with
    a seeded start; columns are rotated onto the singular directions before
    returning.
    """
    n = Z.shape[0]
    gen = rng.generator(seed)
    U, _ = np.linalg.qr(gen.standard_normal((n, k)))
    for _ in range(_SVD_MAX_ITER):
        W = Z @ (Z.T @ U)
        U_new, _ = np.linalg.qr(W)
        cos = np.linalg.svd(U.T @ U_new, compute_uv=False)
        U = U_new
        if 1.0 - cos.min() <= _SVD_TOL:
            break
    # rotate the basis onto eigenvectors of Z Z^T (descending)
    W = Z @ (Z.T @ U)
    small = U.T @ W
    small = (small + small.T) / 2.0
    evals, evecs = np.linalg.eigh(small)
    order = np.argsort(evals)[::-1]
    return U @ evecs[:, order]


def _all_rows_identical(A: sp.csr_matrix) -> bool:
    counts = np.diff(A.indptr)
    if (counts != counts[0]).any():
        return False
    ind = A.indices.reshape(A.shape[0], counts[0]) if counts[0] else None
    if ind is None:
        return True
    return bool((ind == ind[0]).all())


def spectral_consensus(graph: BipartiteGraph, k: int, seed: int) -> ClusterAssignment:
    """Partition the instance vertices of ``graph`` into k consensus groups."""
    if k < 2:
        raise ValueError(f"consensus needs k >= 2, got {k}")
    if graph.n_instances < k:
        raise ValueError(f"need at least k={k} instances, got {graph.n_instances}")
    A = graph.incidence
    kmeans_seed = rng.branch_seed(seed, 1)
    if _all_rows_identical(A):
        # every instance is connected identically; the embedding carries no
        # signal, so cluster the raw incidence directly
        cfg = KmeansConfig(k=k, n_init=1, seed=kmeans_seed)
        return kmeans_fit(A.toarray(), cfg).assignment
    Z = _normalized_incidence(A)
    U = _top_left_singular(Z, k, rng.branch_seed(seed, 0))
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    embedding = U / np.where(norms == 0, 1.0, norms)
    cfg = KmeansConfig(k=k, seed=kmeans_seed)
    return kmeans_fit(embedding, cfg).assignment


def consensus(selected: list[ClusterAssignment], k: int, seed: int) -> ClusterAssignment:
    """build_bipartite + spectral_consensus."""
    return spectral_consensus(build_bipartite(selected), k, seed)
