"""End-to-end orchestration: B branches of (randomize -> extract -> k-means),
violation-based selection, bipartite-graph consensus.

Seed tree (all derived from the master seed, so branch execution order and
worker count never change results):

    branch i weights      branch_seed(branch_seed(master, i), 0)
    branch i k-means      branch_seed(branch_seed(master, i), 1)
    consensus             branch_seed(master, CONSENSUS_STREAM)
    elbow feature sample  branch_seed(master, ELBOW_STREAM)
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import rng
from .core import ClusterAssignment, ClusteringEnsemble, Hyperparams, TimeSeriesDataset
from .extractor import extract_features, make_block_params
from .hbgf import consensus
from .kmeans import KmeansConfig, kmeans_fit
from .metrics import rand_index
from .selection import SelectionConfig, count_violations, select

CONSENSUS_STREAM = 1 << 32
ELBOW_STREAM = (1 << 32) + 1


class BranchError(RuntimeError):
    """A branch failed; carries the branch index for diagnosis."""

    def __init__(self, branch_index: int, cause: BaseException):
        super().__init__(f"branch {branch_index} failed: {cause}")
        self.branch_index = branch_index


def branch_weight_seed(master_seed: int, i: int) -> int:
    return rng.branch_seed(rng.branch_seed(master_seed, i), 0)


def branch_kmeans_seed(master_seed: int, i: int) -> int:
    return rng.branch_seed(rng.branch_seed(master_seed, i), 1)


@dataclass(frozen=True)
class RunReport:
    assignment: ClusterAssignment
    rand_index_vs_truth: float | None
    branch_violation_histogram: dict
    selected_count: int
    wall_time_ms: int
    hyperparams: Hyperparams


def _run_one_branch(dataset: TimeSeriesDataset, hp: Hyperparams, i: int,
                    lr: float, ur: float) -> tuple[ClusterAssignment, float]:
    try:
        params = make_block_params(branch_weight_seed(hp.master_seed, i),
                                   dataset.m, hp)
        features = extract_features(dataset.values, params, pool_size=hp.pool_size)
        cfg = KmeansConfig(k=hp.k, n_init=hp.kmeans_n_init,
                           seed=branch_kmeans_seed(hp.master_seed, i))
        assignment = kmeans_fit(features, cfg).assignment
        return assignment, count_violations(assignment, lr, ur)
    except Exception as exc:
        raise BranchError(i, exc) from exc


def _branch_chunk(args) -> list[tuple[ClusterAssignment, float]]:
    dataset, hp, indices, lr, ur = args
    return [_run_one_branch(dataset, hp, i, lr, ur) for i in indices]


def run_branches(dataset: TimeSeriesDataset, hp: Hyperparams,
                 indices: Iterable[int], jobs: int = 1) -> ClusteringEnsemble:
    """Execute the branch loop for ``indices``; order of results is by index."""
    idx = [int(i) for i in indices]
    lr, ur = hp.bounds(dataset.n)
    if jobs <= 1 or len(idx) < 2:
        results = [_run_one_branch(dataset, hp, i, lr, ur) for i in idx]
    else:
        chunks = [idx[c::jobs] for c in range(jobs)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            per_chunk = list(pool.map(
                _branch_chunk, [(dataset, hp, c, lr, ur) for c in chunks]))
        by_index = {}
        for chunk, res in zip(chunks, per_chunk):
            by_index.update(zip(chunk, res))
        results = [by_index[i] for i in idx]
    return ClusteringEnsemble(
        clusterings=tuple(r[0] for r in results),
        violations=tuple(r[1] for r in results),
    )


def run(dataset: TimeSeriesDataset, hp: Hyperparams, jobs: int = 1) -> RunReport:
    """Full clustering run; deterministic given (dataset, hp)."""
    if dataset.n < hp.k:
        raise ValueError(f"need n >= k, got n={dataset.n}, k={hp.k}")
    if dataset.m < 2:
        raise ValueError(f"need series length >= 2, got {dataset.m}")
    t0 = time.perf_counter()
    ensemble = run_branches(dataset, hp, range(hp.branches), jobs=jobs)
    lr, ur = hp.bounds(dataset.n)
    cfg = SelectionConfig(lr=lr, ur=ur, sr=hp.sr, B=hp.branches)
    survivors = select(ensemble, cfg)
    if hp.k >= 2:
        assignment = consensus(survivors, hp.k,
                               rng.branch_seed(hp.master_seed, CONSENSUS_STREAM))
    else:
        assignment = ClusterAssignment(labels=np.zeros(dataset.n, dtype=np.int64), k=1)
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    ri = None
    if dataset.labels is not None:
        truth = ClusterAssignment(labels=dataset.labels,
                                  k=int(dataset.labels.max()) + 1)
        ri = rand_index(truth, assignment)
    histogram: dict = {}
    for v in ensemble.violations:
        histogram[v] = histogram.get(v, 0) + 1
    return RunReport(
        assignment=assignment,
        rand_index_vs_truth=ri,
        branch_violation_histogram=histogram,
        selected_count=len(survivors),
        wall_time_ms=wall_ms,
        hyperparams=hp,
    )


def save_ensemble(ensemble: ClusteringEnsemble, path: str) -> None:
    """Checkpoint: one clustering per line (see ClusterAssignment.to_line)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for clustering in ensemble.clusterings:
            fh.write(clustering.to_line() + "\n")


def load_ensemble(path: str, lr: float, ur: float) -> ClusteringEnsemble:
    """Load a checkpoint, recomputing violations against (lr, ur)."""
    clusterings = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                clusterings.append(ClusterAssignment.from_line(line))
    return ClusteringEnsemble(
        clusterings=tuple(clusterings),
        violations=tuple(count_violations(c, lr, ur) for c in clusterings),
    )
