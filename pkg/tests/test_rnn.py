"""LSTM kernels, grouping, rearrangement, and the shared pointwise helpers."""

import math

import numpy as np
import pytest

from bsrnnlite import ConfigError, GroupedLayerWeights, LstmWeights
from bsrnnlite import grouped_forward, lstm_forward, lstm_step, rearrange
from bsrnnlite.macs import MacsTally
from bsrnnlite.rnn import dense, grouped_forward_batch, layer_norm, lstm_forward_batch

from reference import naive_lstm_forward


def _random_cell(rng, in_dim, hidden_dim):
    return LstmWeights(
        w_input=rng.uniform(-1, 1, (4 * hidden_dim, in_dim)),
        w_hidden=rng.uniform(-1, 1, (4 * hidden_dim, hidden_dim)),
        bias=rng.uniform(-1, 1, 4 * hidden_dim),
    )


class TestLstmStep:
    def test_unit_weights_hand_trace(self):
        # scalar cell, W = U = 1, b = 0, x = 1: every pre-activation is 1
        w = LstmWeights(np.ones((4, 1)), np.ones((4, 1)), np.zeros(4))
        h, c = lstm_step(np.array([1.0]), (np.zeros(1), np.zeros(1)), w)
        sig1 = 1.0 / (1.0 + math.exp(-1.0))
        c1 = sig1 * math.tanh(1.0)
        h1 = sig1 * math.tanh(c1)
        assert abs(c[0] - c1) < 1e-12
        assert abs(h[0] - h1) < 1e-12
        # second step folds the recurrent term in: pre-activations are 1 + h1
        h2, c2 = lstm_step(np.array([1.0]), (h, c), w)
        pre = 1.0 + h1
        sig2 = 1.0 / (1.0 + math.exp(-pre))
        c_exp = sig2 * c1 + sig2 * math.tanh(pre)
        assert abs(c2[0] - c_exp) < 1e-12
        assert abs(h2[0] - sig2 * math.tanh(c_exp)) < 1e-12

    def test_zero_input_zero_bias_keeps_zero_state(self):
        rng = np.random.default_rng(0)
        w = LstmWeights(rng.uniform(-1, 1, (8, 3)), rng.uniform(-1, 1, (8, 2)), np.zeros(8))
        h, c = lstm_step(np.zeros(3), (np.zeros(2), np.zeros(2)), w)
        assert not h.any() and not c.any()

    def test_shape_validation(self):
        with pytest.raises(ConfigError):
            LstmWeights(np.zeros((8, 3)), np.zeros((8, 3)), np.zeros(8))
        with pytest.raises(ConfigError):
            LstmWeights(np.zeros((12, 3)), np.zeros((8, 2)), np.zeros(8))
        with pytest.raises(ConfigError):
            LstmWeights(np.zeros((8, 3)), np.zeros((8, 2)), np.zeros(4))


class TestLstmForward:
    def test_single_step_equals_fold_base_case(self):
        rng = np.random.default_rng(1)
        w = _random_cell(rng, 3, 4)
        x = rng.standard_normal((1, 3))
        out = lstm_forward(x, w)
        h, _ = lstm_step(x[0], (np.zeros(4), np.zeros(4)), w)
        assert np.array_equal(out[0], h)

    def test_matches_naive_reference(self):
        rng = np.random.default_rng(2)
        for trial in range(20):
            t = int(rng.integers(1, 8))
            i = int(rng.integers(1, 7))
            h = int(rng.integers(1, 7))
            w = _random_cell(rng, i, h)
            seq = rng.standard_normal((t, i))
            bidir = bool(rng.integers(0, 2))
            got = lstm_forward(seq, w, bidirectional=bidir)
            want = naive_lstm_forward(seq, w.w_input, w.w_hidden, w.bias, bidirectional=bidir)
            assert np.max(np.abs(got - want)) < 1e-9

    def test_bidirectional_concatenates(self):
        rng = np.random.default_rng(3)
        w = _random_cell(rng, 2, 5)
        seq = rng.standard_normal((6, 2))
        uni = lstm_forward(seq, w)
        bi = lstm_forward(seq, w, bidirectional=True)
        assert bi.shape == (6, 10)
        assert np.array_equal(bi[:, :5], uni)

    def test_causality(self):
        # outputs before t0 cannot depend on inputs from t0 onward
        rng = np.random.default_rng(4)
        w = _random_cell(rng, 3, 4)
        seq = rng.standard_normal((8, 3))
        changed = seq.copy()
        changed[5:] += 10.0
        assert np.array_equal(lstm_forward(seq, w)[:5], lstm_forward(changed, w)[:5])

    def test_batch_rows_independent(self):
        rng = np.random.default_rng(5)
        w = _random_cell(rng, 3, 4)
        seqs = rng.standard_normal((4, 6, 3))
        batched = lstm_forward_batch(seqs, w)
        for b in range(4):
            assert np.allclose(batched[b], lstm_forward(seqs[b], w), atol=1e-12)

    def test_empty_sequence(self):
        w = _random_cell(np.random.default_rng(6), 3, 4)
        assert lstm_forward(np.zeros((0, 3)), w).shape == (0, 4)

    def test_tally_counts_gate_macs(self):
        w = _random_cell(np.random.default_rng(7), 4, 5)
        tally = MacsTally()
        lstm_forward_batch(np.zeros((2, 3, 4)), w, tally=tally, component="x")
        assert tally.counts == {"x": 2 * 3 * 4 * (4 * 5 + 5 * 5)}


class TestRearrange:
    def test_two_group_example(self):
        assert rearrange(np.array([1.0, 2.0, 3.0, 4.0]), 2).tolist() == [1.0, 3.0, 2.0, 4.0]

    def test_two_group_involution_on_square_width(self):
        # the transpose view is self-inverse exactly when C == g * g
        rng = np.random.default_rng(8)
        x = rng.standard_normal((7, 4))
        assert np.array_equal(rearrange(rearrange(x, 2), 2), x)

    def test_inverse_pair_for_general_width(self):
        # shuffling by g is undone by shuffling by C/g, any divisible width
        rng = np.random.default_rng(8)
        for c, g in ((12, 2), (12, 3), (10, 5), (16, 4)):
            x = rng.standard_normal((5, c))
            assert np.array_equal(rearrange(rearrange(x, g), c // g), x)

    def test_identity_for_one_group(self):
        x = np.random.default_rng(9).standard_normal((3, 8))
        assert np.array_equal(rearrange(x, 1), x)

    def test_is_a_permutation(self):
        x = np.arange(24.0)
        y = rearrange(x, 3)
        assert sorted(y.tolist()) == x.tolist()
        assert y.tolist() != x.tolist()

    def test_divisibility_enforced(self):
        with pytest.raises(ConfigError):
            rearrange(np.zeros(10), 3)


def _grouped(rng, groups, in_dim, hidden_dim, out_dim, bidirectional):
    dirs = 2 if bidirectional else 1
    return GroupedLayerWeights(
        norm_gamma=np.ones(in_dim),
        norm_beta=np.zeros(in_dim),
        forward_cells=tuple(_random_cell(rng, in_dim // groups, hidden_dim // groups)
                            for _ in range(groups)),
        backward_cells=tuple(_random_cell(rng, in_dim // groups, hidden_dim // groups)
                             for _ in range(groups)) if bidirectional else None,
        proj_weight=rng.uniform(-1, 1, (out_dim, dirs * hidden_dim)),
        proj_bias=rng.uniform(-1, 1, out_dim),
    )


class TestGrouped:
    def test_one_group_bitwise_equals_plain(self):
        rng = np.random.default_rng(10)
        w = _grouped(rng, 1, 6, 4, 6, bidirectional=False)
        seq = rng.standard_normal((9, 6))
        assert np.array_equal(grouped_forward(seq, w), lstm_forward(seq, w.forward_cells[0]))

    def test_one_group_bidirectional_bitwise(self):
        rng = np.random.default_rng(11)
        cell = _random_cell(rng, 6, 4)
        w = GroupedLayerWeights(np.ones(6), np.zeros(6), (cell,), (cell,),
                                np.zeros((6, 8)), np.zeros(6))
        seq = rng.standard_normal((5, 6))
        assert np.array_equal(grouped_forward(seq, w), lstm_forward(seq, cell, bidirectional=True))

    def test_two_groups_match_manual_split(self):
        rng = np.random.default_rng(12)
        w = _grouped(rng, 2, 8, 6, 8, bidirectional=True)
        seq = rng.standard_normal((7, 8))
        parts = []
        for j in range(2):
            xj = seq[:, 4 * j : 4 * j + 4]
            fwd = lstm_forward(xj, w.forward_cells[j])
            bwd = lstm_forward(xj[::-1], w.backward_cells[j])[::-1]
            parts.append(np.concatenate([fwd, bwd], axis=-1))
        manual = rearrange(np.concatenate(parts, axis=-1), 2)
        assert np.array_equal(grouped_forward(seq, w), manual)

    def test_output_width_is_dirs_times_hidden(self):
        rng = np.random.default_rng(13)
        seq = rng.standard_normal((4, 8))
        assert grouped_forward(seq, _grouped(rng, 2, 8, 6, 8, False)).shape == (4, 6)
        assert grouped_forward(seq, _grouped(rng, 2, 8, 6, 8, True)).shape == (4, 12)

    def test_direction_flag_must_match_weights(self):
        rng = np.random.default_rng(14)
        w = _grouped(rng, 2, 8, 6, 8, bidirectional=False)
        with pytest.raises(ConfigError):
            grouped_forward(np.zeros((3, 8)), w, bidirectional=True)

    def test_grouped_macs_divide_by_group_count(self):
        # same total dims, half the gate cost per extra group
        rng = np.random.default_rng(15)
        seqs = np.zeros((3, 5, 8))
        t1, t2 = MacsTally(), MacsTally()
        grouped_forward_batch(seqs, _grouped(rng, 1, 8, 6, 8, False), t1, "m")
        grouped_forward_batch(seqs, _grouped(rng, 2, 8, 6, 8, False), t2, "m")
        assert t1.counts["m"] == 2 * t2.counts["m"]

    def test_structure_validation(self):
        rng = np.random.default_rng(16)
        good = _random_cell(rng, 4, 3)
        with pytest.raises(ConfigError):
            GroupedLayerWeights(np.ones(8), np.zeros(8), (good, _random_cell(rng, 4, 2)),
                                None, np.zeros((8, 6)), np.zeros(8))
        with pytest.raises(ConfigError):
            GroupedLayerWeights(np.ones(8), np.zeros(8), (good, good), (good,),
                                np.zeros((8, 6)), np.zeros(8))
        with pytest.raises(ConfigError):
            GroupedLayerWeights(np.ones(3), np.zeros(3), (good,), None,
                                np.zeros((8, 3)), np.zeros(8))


class TestPointwise:
    def test_layer_norm_constant_rows_collapse_to_beta(self):
        beta = np.array([1.0, -2.0, 0.5])
        out = layer_norm(np.full((4, 3), 7.0), np.ones(3), beta)
        assert np.allclose(out, np.broadcast_to(beta, (4, 3)), atol=1e-12)

    def test_layer_norm_statistics(self):
        rng = np.random.default_rng(17)
        x = rng.standard_normal((5, 8))
        out = layer_norm(x, np.ones(8), np.zeros(8))
        assert np.allclose(out.mean(axis=-1), 0.0, atol=1e-12)
        assert np.allclose(out.var(axis=-1), 1.0, atol=1e-4)  # eps shrinks it slightly

    def test_dense_matches_manual_and_counts(self):
        rng = np.random.default_rng(18)
        x = rng.standard_normal((3, 4, 5))
        w = rng.standard_normal((7, 5))
        b = rng.standard_normal(7)
        tally = MacsTally()
        out = dense(x, w, b, tally, "d")
        assert np.allclose(out, np.einsum("bti,oi->bto", x, w) + b, atol=1e-12)
        assert tally.counts == {"d": 3 * 4 * 5 * 7}
