"""Pick the number of clusters with the elbow of the WCSS curve."""

from rwclust import Hyperparams, generate_cbf, znormalize
from rwclust.metrics import elbow_curve

dataset = znormalize(generate_cbf(40, m=128, seed=2))  # 3 planted classes
hp = Hyperparams(k=2, branches=60, master_seed=2)

curve = elbow_curve(dataset, hp, list(range(2, 8)))
print("k    wcss")
for k, w in zip(curve.ks, curve.wcss):
    print(f"{k}    {w:.1f}")

print("second differences (discrete curvature):")
for k, d in curve.second_differences().items():
    print(f"{k}    {d:+.1f}")

print(f"elbow at k = {curve.elbow()} (planted classes: 3)")
