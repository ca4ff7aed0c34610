import numpy as np
import pytest

from rwclust.core import Hyperparams
from rwclust.extractor import (
    BlockParams,
    ConvLayerParams,
    LstmParams,
    block_forward,
    conv1d_forward,
    extract_features,
    feature_dim,
    group_count,
    lstm_forward,
    make_block_params,
    max_pool,
    relu,
)
from rwclust.rng import branch_seed

from oracles import block_naive, conv1d_naive, lstm_naive, max_pool_naive


def conv_params(kernels, biases):
    return ConvLayerParams(kernels=np.asarray(kernels, dtype=float),
                           biases=np.asarray(biases, dtype=float))


def lstm_params(w, r, b):
    return LstmParams(input_weights=np.asarray(w, dtype=float),
                      recurrent_weights=np.asarray(r, dtype=float),
                      biases=np.asarray(b, dtype=float))


def zero_lstm(units=2, channels=1):
    return lstm_params(np.zeros((4 * units, channels)),
                       np.zeros((4 * units, units)),
                       np.zeros(4 * units))


class TestConv:
    def test_identity_kernel(self):
        p = conv_params([[[0, 1, 0]]], [0])
        out = conv1d_forward(np.array([[1.0, 2.0, 3.0]]), p)
        assert np.allclose(out, [[1, 2, 3]])

    def test_all_zero_parameters(self):
        p = conv_params(np.zeros((2, 1, 3)), np.zeros(2))
        out = conv1d_forward(np.array([[5.0, -4.0, 2.0, 9.0]]), p)
        assert np.all(out == 0)

    def test_box_kernel_hand_computed(self):
        p = conv_params([[[1, 1, 1]]], [0])
        out = conv1d_forward(np.array([[1.0, 2.0, 3.0]]), p)
        assert np.allclose(out, [[3, 6, 5]])

    def test_channel_mismatch(self):
        p = conv_params(np.zeros((2, 3, 3)), np.zeros(2))
        with pytest.raises(ValueError):
            conv1d_forward(np.zeros((2, 5)), p)

    def test_matches_naive_oracle(self):
        gen = np.random.default_rng(0)
        for _ in range(25):
            C = int(gen.integers(1, 4))
            L = int(gen.integers(1, 20))
            F = int(gen.integers(1, 5))
            x = gen.normal(size=(C, L))
            p = conv_params(gen.integers(-1, 2, size=(F, C, 3)),
                            gen.integers(-1, 2, size=F))
            assert np.allclose(conv1d_forward(x, p),
                               conv1d_naive(x, p.kernels, p.biases), atol=1e-12)

    def test_rejects_non_ternary(self):
        with pytest.raises(ValueError):
            conv_params([[[0.5, 0, 0]]], [0])


class TestRelu:
    def test_basic(self):
        assert np.allclose(relu(np.array([-1.0, 2.0])), [0, 2])

    def test_all_negative(self):
        assert np.all(relu(np.array([-3.0, -0.1])) == 0)

    def test_mixed(self):
        assert np.allclose(relu(np.array([0.5, -0.5, 0.0])), [0.5, 0, 0])


class TestMaxPool:
    def test_even_length(self):
        out = max_pool(np.array([[1.0, 3.0, 2.0, 5.0]]), 2)
        assert np.allclose(out, [[3, 5]])

    def test_remainder_dropped(self):
        out = max_pool(np.array([[1.0, 3.0, 2.0, 5.0, 9.0]]), 2)
        assert np.allclose(out, [[3, 5]])

    def test_two_channels(self):
        out = max_pool(np.array([[1.0, 2.0], [4.0, 3.0]]), 2)
        assert np.allclose(out, [[2], [4]])

    def test_too_short(self):
        with pytest.raises(ValueError):
            max_pool(np.array([[1.0]]), 2)

    def test_matches_naive_oracle(self):
        gen = np.random.default_rng(1)
        for _ in range(25):
            C = int(gen.integers(1, 4))
            L = int(gen.integers(2, 20))
            x = gen.normal(size=(C, L))
            assert np.allclose(max_pool(x, 2), max_pool_naive(x, 2))


class TestLstm:
    def test_zero_params_give_zero_state(self):
        x = np.random.default_rng(2).normal(size=(6, 1))
        out = lstm_forward(x, zero_lstm())
        assert np.all(out == 0)

    def test_single_step_hand_unrolled(self):
        # one unit, one channel, all parameters +1, input 1.0:
        # every gate sees z = 1*1 + 0 + 1 = 2
        p = lstm_params(np.ones((4, 1)), np.ones((4, 1)), np.ones(4))
        out = lstm_forward(np.array([[1.0]]), p)
        sig2 = 1.0 / (1.0 + np.exp(-2.0))
        c = sig2 * np.tanh(2.0)
        assert out[0] == pytest.approx(sig2 * np.tanh(c), abs=1e-12)

    def test_outputs_bounded(self):
        gen = np.random.default_rng(3)
        p = lstm_params(gen.integers(-1, 2, size=(32, 4)),
                        gen.integers(-1, 2, size=(32, 8)),
                        gen.integers(-1, 2, size=32))
        out = lstm_forward(gen.normal(size=(50, 4)) * 100, p)
        assert np.all(np.abs(out) < 1.0)

    def test_channel_mismatch(self):
        with pytest.raises(ValueError):
            lstm_forward(np.zeros((3, 2)), zero_lstm(channels=1))

    def test_matches_naive_oracle(self):
        gen = np.random.default_rng(4)
        for _ in range(20):
            T = int(gen.integers(1, 6))
            C = int(gen.integers(1, 4))
            u = int(gen.integers(1, 4))
            p = lstm_params(gen.integers(-1, 2, size=(4 * u, C)),
                            gen.integers(-1, 2, size=(4 * u, u)),
                            gen.integers(-1, 2, size=4 * u))
            x = gen.normal(size=(T, C))
            assert np.allclose(
                lstm_forward(x, p),
                lstm_naive(x, p.input_weights, p.recurrent_weights, p.biases),
                atol=1e-12)


class TestBlockStructure:
    def test_group_counts(self):
        assert group_count(2) == 1
        assert group_count(8) == 3
        assert group_count(128) == 7
        assert group_count(100) == 6

    def test_m2_yields_single_group(self):
        hp = Hyperparams(k=2)
        params = make_block_params(1, 2, hp)
        assert len(params.conv_groups) == 1

    def test_m128_constructs_all_requested_groups(self):
        hp = Hyperparams(k=2)
        params = make_block_params(1, 128, hp)
        assert len(params.conv_groups) == 7  # lengths 128 -> 64 -> ... -> 1
        assert feature_dim(128, hp) == 1 * 8 + 8

    def test_m8_shape_arithmetic(self):
        hp = Hyperparams(k=2)
        params = make_block_params(5, 8, hp)
        assert len(params.conv_groups) == 3
        vec = block_forward(np.arange(8.0), params)
        assert vec.shape == (16,)  # 1*8 flattened + 8 lstm units

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            make_block_params(1, 1, Hyperparams(k=2))

    def test_zero_bias_variant(self):
        hp = Hyperparams(k=2)
        plain = make_block_params(3, 32, hp)
        nobias = make_block_params(3, 32, hp, zero_bias=True)
        assert any(g.biases.any() for g in plain.conv_groups)
        assert not any(g.biases.any() for g in nobias.conv_groups)
        assert not nobias.lstm.biases.any()
        for gp, gn in zip(plain.conv_groups, nobias.conv_groups):
            assert np.array_equal(gp.kernels, gn.kernels)
        assert np.array_equal(plain.lstm.input_weights, nobias.lstm.input_weights)

    def test_same_seed_same_params(self):
        hp = Hyperparams(k=2)
        a = make_block_params(99, 64, hp)
        b = make_block_params(99, 64, hp)
        for ga, gb in zip(a.conv_groups, b.conv_groups):
            assert np.array_equal(ga.kernels, gb.kernels)
            assert np.array_equal(ga.biases, gb.biases)
        assert np.array_equal(a.lstm.input_weights, b.lstm.input_weights)
        assert np.array_equal(a.lstm.recurrent_weights, b.lstm.recurrent_weights)
        assert np.array_equal(a.lstm.biases, b.lstm.biases)

    def test_shape_law_halving(self):
        hp = Hyperparams(k=2)
        params = make_block_params(21, 20, hp)
        x = np.random.default_rng(0).normal(size=(3, 1, 20))
        L = 20
        from rwclust.extractor import conv1d_forward as conv
        for g in params.conv_groups:
            x = max_pool(relu(conv(x, g)), 2)
            L //= 2
            assert x.shape[2] == L


class TestBlockForward:
    def test_all_zero_weights_give_zero_features(self):
        groups = (ConvLayerParams(kernels=np.zeros((8, 1, 3)), biases=np.zeros(8)),)
        params = BlockParams(conv_groups=groups, lstm=zero_lstm(units=8, channels=8))
        vec = block_forward(np.random.default_rng(1).normal(size=16), params)
        assert np.all(vec == 0)

    def test_identical_series_identical_features(self):
        hp = Hyperparams(k=2)
        params = make_block_params(7, 32, hp)
        series = np.random.default_rng(2).normal(size=32)
        X = np.vstack([series, series])
        feats = extract_features(X, params)
        assert np.array_equal(feats[0], feats[1])
        # batch and single-series paths may differ in final ulps (BLAS path)
        assert np.allclose(feats[0], block_forward(series, params), atol=1e-9)

    def test_matches_naive_block_oracle(self):
        gen = np.random.default_rng(5)
        hp = Hyperparams(k=2)
        for trial in range(10):
            m = int(gen.integers(4, 33))
            params = make_block_params(branch_seed(6, trial), m, hp)
            series = gen.normal(size=m)
            assert np.allclose(block_forward(series, params),
                               block_naive(series, params), atol=1e-9)

    def test_values_finite_for_wild_inputs(self):
        hp = Hyperparams(k=2)
        params = make_block_params(8, 64, hp)
        X = np.random.default_rng(6).normal(size=(4, 64)) * 1e6
        assert np.isfinite(extract_features(X, params)).all()
