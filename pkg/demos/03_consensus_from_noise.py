"""Consensus pulls a planted split out of a mostly-random ensemble.

With a fraction gamma of members agreeing on the true split and the rest
labeling uniformly at random, the ensemble size needed for reliable
recovery is at least -2 ln(alpha) / gamma^2.
"""

import numpy as np

from rwclust import ensemble_size_lower_bound
from rwclust.core import ClusterAssignment
from rwclust.hbgf import consensus
from rwclust.metrics import rand_index

alpha, gamma = 0.05, 0.3
bound = ensemble_size_lower_bound(alpha, gamma)
print(f"alpha={alpha}, gamma={gamma}: need at least {bound:.2f} members")

n = 40
planted = ClusterAssignment(labels=np.repeat([0, 1], n // 2), k=2)
gen = np.random.default_rng(0)

b = 70  # above the bound
relevant = int(round(gamma * b))
members = [planted] * relevant
members += [ClusterAssignment(labels=gen.integers(0, 2, size=n), k=2)
            for _ in range(b - relevant)]

got = consensus(members, 2, seed=123)
print(f"members: {relevant} planted + {b - relevant} random")
print(f"consensus vs planted split: RI = {rand_index(planted, got):.3f}")
