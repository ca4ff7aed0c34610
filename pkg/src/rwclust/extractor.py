"""Forward-only CNN-LSTM feature extraction with random ternary parameters.

One block = g groups of [conv1d (same padding) -> ReLU -> max-pool], with
g = max(1, floor(log2 m)), followed by an LSTM read over the final pooled
feature map.  The feature vector is the flattened final map (channel-major:
all timesteps of filter 0, then filter 1, ...) concatenated with the LSTM's
final hidden state.  No training anywhere; every parameter is drawn i.i.d.
from {-1, 0, +1}.

Parameter draw order (one contiguous ternary stream per branch seed):
for each group in depth order, the conv kernels (filters, in_channels,
kernel_size) in C order, then the conv biases; after all groups, the LSTM
input weights (4*units, filters), recurrent weights (4*units, units) and
biases (4*units).  Gate rows are packed [input, forget, candidate, output].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

from . import rng
from .core import Hyperparams

_TERNARY = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class ConvLayerParams:
    kernels: np.ndarray  # (filters, in_channels, kernel_size)
    biases: np.ndarray  # (filters,)

    def __post_init__(self):
        kernels = np.asarray(self.kernels, dtype=np.float64)
        biases = np.asarray(self.biases, dtype=np.float64)
        if kernels.ndim != 3:
            raise ValueError("kernels must have shape (filters, in_channels, kernel_size)")
        if biases.shape != (kernels.shape[0],):
            raise ValueError("biases must have one entry per filter")
        for arr in (kernels, biases):
            if not np.isin(arr, _TERNARY).all():
                raise ValueError("conv parameters must be ternary (-1, 0, +1)")
        object.__setattr__(self, "kernels", kernels)
        object.__setattr__(self, "biases", biases)


@dataclass(frozen=True)
class LstmParams:
    input_weights: np.ndarray  # (4*units, in_channels)
    recurrent_weights: np.ndarray  # (4*units, units)
    biases: np.ndarray  # (4*units,)

    def __post_init__(self):
        w = np.asarray(self.input_weights, dtype=np.float64)
        r = np.asarray(self.recurrent_weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64)
        if w.ndim != 2 or r.ndim != 2 or w.shape[0] != r.shape[0] or w.shape[0] % 4:
            raise ValueError("LSTM weights must stack 4 gates row-wise")
        if r.shape[1] * 4 != r.shape[0] or b.shape != (w.shape[0],):
            raise ValueError("inconsistent LSTM parameter shapes")
        for arr in (w, r, b):
            if not np.isin(arr, _TERNARY).all():
                raise ValueError("LSTM parameters must be ternary (-1, 0, +1)")
        object.__setattr__(self, "input_weights", w)
        object.__setattr__(self, "recurrent_weights", r)
        object.__setattr__(self, "biases", b)

    @property
    def units(self) -> int:
        return self.recurrent_weights.shape[1]


@dataclass(frozen=True)
class BlockParams:
    conv_groups: tuple
    lstm: LstmParams

    def __post_init__(self):
        groups = tuple(self.conv_groups)
        if not groups:
            raise ValueError("a block needs at least one conv group")
        object.__setattr__(self, "conv_groups", groups)


def conv1d_forward(x: np.ndarray, params: ConvLayerParams) -> np.ndarray:
    """Same-length zero-padded cross-correlation.

    ``x`` is (channels, L) for one series or (n, channels, L) for a batch;
    the output swaps channels for filters and keeps L.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    if x.ndim != 3:
        raise ValueError("input must be (channels, L) or (n, channels, L)")
    n, c, L = x.shape
    filters, c_in, ks = params.kernels.shape
    if c != c_in:
        raise ValueError(f"input has {c} channels but kernels expect {c_in}")
    if L < 1:
        raise ValueError("input length must be >= 1")
    left = ks // 2
    right = ks - 1 - left
    xp = np.pad(x, ((0, 0), (0, 0), (left, right)))
    win = sliding_window_view(xp, ks, axis=2)  # (n, c, L, ks)
    out = np.einsum("nclk,fck->nfl", win, params.kernels, optimize=True)
    out += params.biases[:, None]
    return out[0] if squeeze else out


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def max_pool(x: np.ndarray, pool_size: int) -> np.ndarray:
    """Non-overlapping per-channel max over windows of ``pool_size``.

    A trailing remainder shorter than ``pool_size`` is dropped.
    """
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    n, c, L = x.shape
    if L < pool_size:
        raise ValueError(f"cannot pool length {L} with pool_size {pool_size}")
    L_out = L // pool_size
    out = x[:, :, : L_out * pool_size].reshape(n, c, L_out, pool_size).max(axis=3)
    return out[0] if squeeze else out


def lstm_forward(x: np.ndarray, params: LstmParams) -> np.ndarray:
    """Final hidden state of a standard LSTM run over ``x`` from zero state.

    ``x`` is (T, channels) for one series or (n, T, channels) for a batch.
    Gates use the logistic sigmoid, the candidate uses tanh.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    n, T, c = x.shape
    u = params.units
    if c != params.input_weights.shape[1]:
        raise ValueError(
            f"input has {c} channels but LSTM expects {params.input_weights.shape[1]}")
    if T < 1:
        raise ValueError("LSTM needs at least one timestep")
    wT = params.input_weights.T
    rT = params.recurrent_weights.T
    b = params.biases
    h = np.zeros((n, u))
    cell = np.zeros((n, u))
    for t in range(T):
        z = x[:, t, :] @ wT + h @ rT + b
        i = expit(z[:, :u])
        f = expit(z[:, u:2 * u])
        g = np.tanh(z[:, 2 * u:3 * u])
        o = expit(z[:, 3 * u:])
        cell = f * cell + i * g
        h = o * np.tanh(cell)
    return h[0] if squeeze else h


def group_count(m: int) -> int:
    """Number of conv groups requested for series length m."""
    if m < 2:
        raise ValueError(f"series length must be >= 2, got {m}")
    return max(1, int(math.floor(math.log2(m))))


def _group_lengths(m: int, pool_size: int) -> list[int]:
    # Running lengths after each constructed group; construction stops once
    # the map can no longer be pooled (length < pool_size).
    lengths = []
    L = m
    for _ in range(group_count(m)):
        if L < pool_size:
            break
        L = L // pool_size
        lengths.append(L)
    if not lengths:
        raise ValueError(f"length {m} cannot be pooled with pool_size {pool_size}")
    return lengths


def make_block_params(seed: int, m: int, hp: Hyperparams,
                      zero_bias: bool = False) -> BlockParams:
    """Draw one branch's full parameter set from its seed.

    ``zero_bias`` zeroes all biases (conv and LSTM) after drawing, leaving
    the kernel/weight draws unchanged so the two variants stay comparable.
    """
    lengths = _group_lengths(m, hp.pool_size)
    f, ks, u = hp.filters, hp.kernel_size, hp.lstm_units
    shapes = []
    c_in = 1
    for _ in lengths:
        shapes.append((f, c_in, ks))
        shapes.append((f,))
        c_in = f
    shapes.extend([(4 * u, f), (4 * u, u), (4 * u,)])
    total = sum(int(np.prod(s)) for s in shapes)
    stream = rng.sample_ternary_weights(seed, total)
    chunks = []
    pos = 0
    for s in shapes:
        size = int(np.prod(s))
        chunk = stream[pos: pos + size].reshape(s)
        if zero_bias and len(s) == 1:
            chunk = np.zeros(s)
        chunks.append(chunk)
        pos += size
    groups = tuple(
        ConvLayerParams(kernels=chunks[2 * i], biases=chunks[2 * i + 1])
        for i in range(len(lengths))
    )
    lstm = LstmParams(input_weights=chunks[-3], recurrent_weights=chunks[-2],
                      biases=chunks[-1])
    return BlockParams(conv_groups=groups, lstm=lstm)


def block_forward(series: np.ndarray, params: BlockParams,
                  pool_size: int = 2) -> np.ndarray:
    """Feature vector for one series: [flattened final conv map || lstm h]."""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("block_forward takes a single 1-D series")
    return extract_features(x[None], params, pool_size=pool_size)[0]


def extract_features(X: np.ndarray, params: BlockParams,
                     pool_size: int = 2) -> np.ndarray:
    """(n, m) series matrix -> (n, d) feature matrix for one branch."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be an (n, m) matrix")
    x = X[:, None, :]  # (n, 1, m)
    for conv in params.conv_groups:
        x = max_pool(relu(conv1d_forward(x, conv)), pool_size)
    n, c, L = x.shape
    flat = x.reshape(n, c * L)  # channel-major
    hidden = lstm_forward(x.transpose(0, 2, 1), params.lstm)
    return np.concatenate([flat, hidden], axis=1)


def feature_dim(m: int, hp: Hyperparams) -> int:
    """Feature dimension d for series length m under ``hp``."""
    lengths = _group_lengths(m, hp.pool_size)
    return lengths[-1] * hp.filters + hp.lstm_units
