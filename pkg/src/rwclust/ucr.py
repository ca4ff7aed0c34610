"""Dataset ingestion and synthetic generation.

UCR-style delimited text: one series per row, class label first, values
after.  Train and test files are fused (train rows first).  Rows shorter
than the longest row, and missing-value tokens (blank or NaN), are
zero-padded / zeroed so every series shares one length.
"""

from __future__ import annotations

import math
import os
import warnings

import numpy as np

from . import rng
from .core import TimeSeriesDataset


class UcrFormatError(ValueError):
    """A data file failed to parse; the message carries file and line."""


def _sniff_delimiter(line: str) -> str:
    return "\t" if line.count("\t") >= line.count(",") else ","


def _parse_file(path: str) -> tuple[list[float], list[list[float]], int]:
    labels: list[float] = []
    rows: list[list[float]] = []
    missing = 0
    with open(path, "r", encoding="utf-8") as fh:
        delim = None
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip("\n\r")
            if not line.strip():
                continue
            if delim is None:
                delim = _sniff_delimiter(line)
            fields = line.split(delim)
            if len(fields) < 2:
                raise UcrFormatError(f"{path}:{lineno}: row has fewer than 2 fields")
            try:
                label = float(fields[0])
            except ValueError as exc:
                raise UcrFormatError(f"{path}:{lineno}: bad label {fields[0]!r}") from exc
            values = []
            for field in fields[1:]:
                token = field.strip()
                if token == "" or token.lower() == "nan":
                    values.append(0.0)
                    missing += 1
                    continue
                try:
                    v = float(token)
                except ValueError as exc:
                    raise UcrFormatError(f"{path}:{lineno}: bad value {token!r}") from exc
                if math.isnan(v):
                    v = 0.0
                    missing += 1
                values.append(v)
            labels.append(label)
            rows.append(values)
    return labels, rows, missing


def load_ucr(train_path: str, test_path: str | None = None,
             name: str | None = None) -> TimeSeriesDataset:
    """Load (and fuse) UCR-format file(s) into a dataset.

    Labels are remapped to 0..k-1 preserving their sorted original order;
    short rows are right-padded with zeros to the longest row.
    """
    labels, rows, missing = _parse_file(train_path)
    if test_path is not None:
        t_labels, t_rows, t_missing = _parse_file(test_path)
        labels += t_labels
        rows += t_rows
        missing += t_missing
    if not rows:
        raise UcrFormatError(f"no data rows in {train_path}")
    if missing:
        warnings.warn(f"{missing} missing values replaced with 0.0", stacklevel=2)
    m = max(len(r) for r in rows)
    values = np.zeros((len(rows), m))
    for i, r in enumerate(rows):
        values[i, : len(r)] = r
    originals = sorted(set(labels))
    mapping = {v: i for i, v in enumerate(originals)}
    mapped = np.array([mapping[v] for v in labels], dtype=np.int64)
    if name is None:
        name = os.path.splitext(os.path.basename(train_path))[0]
        for suffix in ("_TRAIN", "_TEST"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
    return TimeSeriesDataset(values=values, labels=mapped, name=name,
                             label_values=tuple(originals))


def generate_cbf(n_per_class: int, m: int = 128, seed: int = 0) -> TimeSeriesDataset:
    """Cylinder / bell / funnel synthetic dataset, n_per_class series each.

    Each series is standard-normal noise plus a plateau of height 6+eta on a
    random window [a, b]: flat for cylinders, rising ramp for bells, falling
    ramp for funnels.  a ~ U[m/8, m/4], b-a ~ U[m/4, m/2] (integer bounds).
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    if m < 16:
        raise ValueError(f"m must be >= 16, got {m}")
    gen = rng.generator(seed)
    t = np.arange(m)
    values = np.empty((3 * n_per_class, m))
    labels = np.repeat(np.arange(3, dtype=np.int64), n_per_class)
    row = 0
    for cls in range(3):
        for _ in range(n_per_class):
            a = int(gen.integers(m // 8, m // 4, endpoint=True))
            b = a + int(gen.integers(m // 4, m // 2, endpoint=True))
            eta = gen.standard_normal()
            eps = gen.standard_normal(m)
            window = ((t >= a) & (t <= b)).astype(np.float64)
            if cls == 1:
                window *= (t - a) / (b - a)
            elif cls == 2:
                window *= (b - t) / (b - a)
            values[row] = (6.0 + eta) * window + eps
            row += 1
    return TimeSeriesDataset(values=values, labels=labels, name="cbf")


def inject_noise(dataset: TimeSeriesDataset, scale: float,
                 seed: int = 0) -> TimeSeriesDataset:
    """Add i.i.d. N(0, scale^2) to every value; labels unchanged."""
    if scale < 0:
        raise ValueError(f"scale must be >= 0, got {scale}")
    if scale == 0:
        return dataset
    gen = rng.generator(seed)
    noisy = dataset.values + scale * gen.standard_normal(dataset.values.shape)
    return TimeSeriesDataset(values=noisy, labels=dataset.labels,
                             name=dataset.name, label_values=dataset.label_values)


def pad_with_noise(dataset: TimeSeriesDataset, target_m: int,
                   seed: int = 0) -> TimeSeriesDataset:
    """Extend every series to ``target_m`` with standard-normal values."""
    if target_m < dataset.m:
        raise ValueError(f"target_m {target_m} is below current length {dataset.m}")
    if target_m == dataset.m:
        return dataset
    gen = rng.generator(seed)
    pad = gen.standard_normal((dataset.n, target_m - dataset.m))
    return TimeSeriesDataset(values=np.hstack([dataset.values, pad]),
                             labels=dataset.labels, name=dataset.name,
                             label_values=dataset.label_values)


def znormalize(dataset: TimeSeriesDataset) -> TimeSeriesDataset:
    """Per-series z-normalization (constant series are left at zero mean)."""
    mean = dataset.values.mean(axis=1, keepdims=True)
    std = dataset.values.std(axis=1, keepdims=True)
    std = np.where(std == 0, 1.0, std)
    return TimeSeriesDataset(values=(dataset.values - mean) / std,
                             labels=dataset.labels, name=dataset.name,
                             label_values=dataset.label_values)


def write_csv(dataset: TimeSeriesDataset, path: str) -> None:
    """Write back in UCR comma-delimited form (original labels if known)."""
    lookup = dataset.label_values
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(dataset.n):
            if dataset.labels is None:
                label = 0.0
            else:
                lid = int(dataset.labels[i])
                label = lookup[lid] if lookup else float(lid)
            row = ",".join(repr(float(v)) for v in dataset.values[i])
            fh.write(f"{float(label)!r},{row}\n")
