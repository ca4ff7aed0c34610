"""Training-free time series clustering.

Diverse representations come from forward passes through untrained
CNN-LSTM blocks with random {-1, 0, +1} weights; each branch is clustered
with k-means, size-violating clusterings are filtered out, and the
survivors are fused by partitioning an instance-cluster bipartite graph.
"""

from .core import (
    ClusterAssignment,
    ClusteringEnsemble,
    Hyperparams,
    TimeSeriesDataset,
    average_cluster_size,
)
from .extractor import (
    BlockParams,
    ConvLayerParams,
    LstmParams,
    block_forward,
    conv1d_forward,
    extract_features,
    lstm_forward,
    make_block_params,
    max_pool,
    relu,
)
from .hbgf import BipartiteGraph, build_bipartite, consensus, spectral_consensus
from .kmeans import KmeansConfig, KmeansResult, kmeans_fit, kmeans_pp_init
from .metrics import (
    ElbowCurve,
    elbow_curve,
    ensemble_size_lower_bound,
    rand_index,
    wcss,
)
from .pipeline import (
    BranchError,
    RunReport,
    load_ensemble,
    run,
    run_branches,
    save_ensemble,
)
from .rng import branch_seed, sample_ternary_weights
from .selection import SelectionConfig, count_violations, select
from .ucr import (
    UcrFormatError,
    generate_cbf,
    inject_noise,
    load_ucr,
    pad_with_noise,
    znormalize,
)

__version__ = "0.1.0"
