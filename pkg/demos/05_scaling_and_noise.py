"""Wall time grows linearly with dataset size; accuracy survives added noise.

Small sizes keep the demo quick; the benchmarking CLI runs the full
protocol (rwclust scale-test / rwclust noise-test).
"""

import time

import numpy as np

from rwclust import Hyperparams, generate_cbf, inject_noise, run, znormalize

print("instances   wall_ms   rand_index")
sizes, times = [], []
for per_class in (10, 20, 40, 80):
    dataset = generate_cbf(per_class, m=64, seed=3)
    hp = Hyperparams(k=3, branches=50, master_seed=3, kmeans_n_init=1)
    t0 = time.perf_counter()
    report = run(dataset, hp)
    ms = (time.perf_counter() - t0) * 1000
    sizes.append(dataset.n)
    times.append(ms)
    print(f"{dataset.n:9d}   {ms:7.0f}   {report.rand_index_vs_truth:.3f}")

slope, intercept = np.polyfit(sizes, times, 1)
fitted = slope * np.array(sizes) + intercept
r2 = 1 - ((np.array(times) - fitted) ** 2).sum() / ((times - np.mean(times)) ** 2).sum()
print(f"linear fit: {slope:.2f} ms/instance, R^2 = {r2:.3f}")

print("\nnoise scale   rand_index")
clean = znormalize(generate_cbf(30, m=64, seed=4))
for scale in (0.0, 0.1, 0.3, 0.5):
    noisy = inject_noise(clean, scale, seed=5)
    hp = Hyperparams(k=3, branches=50, master_seed=4, kmeans_n_init=1)
    print(f"{scale:11.2f}   {run(noisy, hp).rand_index_vs_truth:.3f}")
