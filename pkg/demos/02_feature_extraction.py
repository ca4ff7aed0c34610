"""Peek inside one branch: random ternary parameters and the forward pass."""

import numpy as np

from rwclust import Hyperparams, generate_cbf
from rwclust.extractor import extract_features, feature_dim, make_block_params
from rwclust.pipeline import branch_weight_seed

hp = Hyperparams(k=3)
dataset = generate_cbf(5, m=128, seed=1)

params = make_block_params(branch_weight_seed(hp.master_seed, 0), dataset.m, hp)
print(f"conv groups: {len(params.conv_groups)} (length halves per group: 128 -> 1)")
k0 = params.conv_groups[0].kernels
print(f"first kernel tensor {k0.shape}, values {sorted(set(k0.ravel().tolist()))}")

feats = extract_features(dataset.values, params)
print(f"feature matrix: {feats.shape}, expected d = {feature_dim(dataset.m, hp)}")
print("first feature vector:")
print(np.array2string(feats[0], precision=2, suppress_small=True))

# different branch seed -> different random weights -> different view of the data
params_b = make_block_params(branch_weight_seed(hp.master_seed, 1), dataset.m, hp)
feats_b = extract_features(dataset.values, params_b)
print(f"branch 1 differs from branch 0: {not np.allclose(feats, feats_b)}")
