"""Command-line harness: cluster, elbow, scale-test, noise-test.

Exit codes: 0 ok, 1 bad flags, 2 I/O error, 3 pipeline error.  Result CSVs
use fixed headers, append mode (header written only when the file is new),
UTF-8 and LF line endings.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from .core import Hyperparams, TimeSeriesDataset
from .metrics import elbow_curve
from .pipeline import BranchError, RunReport, run
from . import ucr

RUN_CSV_HEADER = "dataset,n,m,k,B,sr,seed,rand_index,selected_S,wall_time_ms"

DEFAULT_NOISE_SCALES = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)

_FAST_BRANCHES = 100


class _Parser(argparse.ArgumentParser):
    # bad flags exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_data_flags(p, require_k=True):
    p.add_argument("--train", required=True, help="UCR-format data file")
    p.add_argument("--test", default=None, help="optional test split to fuse")
    if require_k:
        p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--znorm", action="store_true", help="z-normalize each series")


def _add_run_flags(p):
    p.add_argument("--branches", type=int, default=None,
                   help="ensemble branches (default 800; 100 with --fast)")
    p.add_argument("--sr", type=float, default=0.1, help="selection rate")
    p.add_argument("--lower-mult", type=float, default=0.3)
    p.add_argument("--upper-mult", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=42, help="master seed")
    p.add_argument("--fast", action="store_true",
                   help="scaling-study profile: single k-means init, 100 branches")
    p.add_argument("--jobs", type=int, default=1, help="max parallel workers")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rwclust",
                     description="training-free time series clustering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", parents=[], help="cluster one dataset")
    _add_data_flags(p)
    _add_run_flags(p)
    p.add_argument("--out", default=None, help="append a result row to this CSV")
    p.add_argument("--labels-out", default=None,
                   help="write consensus labels, one integer per line")

    p = sub.add_parser("elbow", help="WCSS curve over a k range")
    _add_data_flags(p, require_k=False)
    _add_run_flags(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--out", default=None, help="write the (k, wcss) curve CSV here")

    p = sub.add_parser("scale-test", help="wall-time linearity on synthetic data")
    p.add_argument("--mode", choices=["instances", "length"], required=True)
    p.add_argument("--sizes", required=True,
                   help="comma-separated ascending sizes (at least 4)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="write (size, mean_ms, ...) CSV here")

    p = sub.add_parser("noise-test", help="Rand Index under added Gaussian noise")
    _add_data_flags(p, require_k=False)
    _add_run_flags(p)
    p.add_argument("--k", type=int, default=None,
                   help="clusters (default: number of ground-truth classes)")
    p.add_argument("--scales", default=None,
                   help="comma-separated noise scales (default 0.05,0.1,0.2,0.3,0.4,0.5)")
    p.add_argument("--seeds", type=int, default=10, help="seeds per scale")
    p.add_argument("--out", default=None)

    return parser


def _load(args) -> TimeSeriesDataset:
    dataset = ucr.load_ucr(args.train, args.test)
    if getattr(args, "znorm", False):
        dataset = ucr.znormalize(dataset)
    return dataset


def _hyperparams(args, k: int, n: int) -> Hyperparams:
    branches = args.branches
    if branches is None:
        branches = _FAST_BRANCHES if args.fast else 800
    # tiny ensembles: raise sr so the selection quota stays >= 1 clustering
    sr = max(args.sr, 1.0 / branches)
    return Hyperparams(
        k=k, branches=branches, sr=sr,
        lower_mult=args.lower_mult, upper_mult=args.upper_mult,
        master_seed=args.seed,
        kmeans_n_init=1 if args.fast else 10,
    )


def _append_run_row(path: str, report: RunReport, dataset: TimeSeriesDataset) -> None:
    new = not (os.path.exists(path) and os.path.getsize(path) > 0)
    hp = report.hyperparams
    ri = "" if report.rand_index_vs_truth is None else repr(report.rand_index_vs_truth)
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        if new:
            fh.write(RUN_CSV_HEADER + "\n")
        fh.write(f"{dataset.name},{dataset.n},{dataset.m},{hp.k},{hp.branches},"
                 f"{hp.sr},{hp.master_seed},{ri},{report.selected_count},"
                 f"{report.wall_time_ms}\n")


def _cmd_cluster(args) -> int:
    dataset = _load(args)
    hp = _hyperparams(args, args.k, dataset.n)
    report = run(dataset, hp, jobs=args.jobs)
    if args.labels_out:
        with open(args.labels_out, "w", encoding="utf-8", newline="\n") as fh:
            for v in report.assignment.labels:
                fh.write(f"{int(v)}\n")
    if args.out:
        _append_run_row(args.out, report, dataset)
    if report.rand_index_vs_truth is not None:
        print(f"rand_index {report.rand_index_vs_truth:.6f}")
    print(f"selected {report.selected_count} of {hp.branches} branches "
          f"in {report.wall_time_ms} ms")
    return 0


def _cmd_elbow(args) -> int:
    dataset = _load(args)
    if args.k_min < 2 or args.k_max < args.k_min:
        raise SystemExit(_usage_error("need 2 <= k-min <= k-max"))
    if args.k_max > dataset.n:
        raise SystemExit(_usage_error(f"k-max {args.k_max} exceeds n={dataset.n}"))
    hp = _hyperparams(args, args.k_min, dataset.n)
    curve = elbow_curve(dataset, hp, list(range(args.k_min, args.k_max + 1)))
    lines = ["k,wcss"] + [f"{k},{w!r}" for k, w in zip(curve.ks, curve.wcss)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if len(curve.ks) >= 3:
        print(f"elbow {curve.elbow()}")
    return 0


def _ols_r2(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def _cmd_scale_test(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if len(sizes) < 4 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise SystemExit(_usage_error("need at least 4 ascending sizes"))
    rows = []
    for size in sizes:
        if args.mode == "instances":
            per = max(1, size // 3)
            dataset = ucr.generate_cbf(per, m=100, seed=args.seed)
            if dataset.n != size:  # top up to the exact requested n
                extra = ucr.generate_cbf(1, m=100, seed=args.seed + 1)
                reps = size - dataset.n
                dataset = TimeSeriesDataset(
                    values=np.vstack([dataset.values, extra.values[:reps]]),
                    labels=np.concatenate([dataset.labels, extra.labels[:reps]]),
                    name=dataset.name)
        else:
            base = ucr.generate_cbf(40, m=128, seed=args.seed)
            dataset = ucr.pad_with_noise(base, size, seed=args.seed)
        hp = Hyperparams(k=args.k, branches=_FAST_BRANCHES, master_seed=args.seed,
                         kmeans_n_init=1)
        times, ris = [], []
        for _ in range(args.reps):
            report = run(dataset, hp, jobs=args.jobs)
            times.append(report.wall_time_ms)
            ris.append(report.rand_index_vs_truth)
        rows.append((size, float(np.mean(times)), float(np.mean(ris))))
    slope, intercept, r2 = _ols_r2(np.array([r[0] for r in rows], dtype=float),
                                   np.array([r[1] for r in rows]))
    lines = ["size,mean_ms,mean_rand_index"]
    lines += [f"{s},{ms!r},{ri!r}" for s, ms, ri in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    print(f"slope {slope:.6f} intercept {intercept:.3f} r2 {r2:.4f}")
    return 0


def _cmd_noise_test(args) -> int:
    dataset = _load(args)
    k = args.k
    if k is None:
        if dataset.labels is None:
            raise SystemExit(_usage_error("--k required when data has no labels"))
        k = dataset.n_classes
    scales = (DEFAULT_NOISE_SCALES if args.scales is None else
              tuple(float(s) for s in args.scales.split(",") if s.strip()))
    if any(s < 0 for s in scales):
        raise SystemExit(_usage_error("noise scales must be non-negative"))
    hp0 = _hyperparams(args, k, dataset.n)
    rows = []
    for scale in scales:
        ris = []
        for s in range(args.seeds):
            noisy = ucr.inject_noise(dataset, scale, seed=hp0.master_seed + 1000 + s)
            hp = replace(hp0, master_seed=hp0.master_seed + s)
            ris.append(run(noisy, hp, jobs=args.jobs).rand_index_vs_truth)
        rows.append((scale, float(np.mean(ris))))
    lines = ["scale,mean_rand_index"] + [f"{s!r},{ri!r}" for s, ri in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def _usage_error(message: str) -> int:
    sys.stderr.write(f"rwclust: error: {message}\n")
    return 1


_COMMANDS = {
    "cluster": _cmd_cluster,
    "elbow": _cmd_elbow,
    "scale-test": _cmd_scale_test,
    "noise-test": _cmd_noise_test,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BranchError as exc:
        sys.stderr.write(f"rwclust: pipeline error: {exc}\n")
        return 3
    except (OSError, ucr.UcrFormatError) as exc:
        sys.stderr.write(f"rwclust: i/o error: {exc}\n")
        return 2
    except SystemExit:
        raise
    except ValueError as exc:
        sys.stderr.write(f"rwclust: pipeline error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
