"""Ensemble partitioning, boosting recurrence and prediction."""

import math

import numpy as np
import pytest

from boosthd.boost import (
    BoostConfig,
    boost_rounds,
    fit_boost,
    fit_online,
    partition_dimensions,
    predict_boost,
    predict_boost_batch,
    vote_scores,
)
from boosthd.data import standardize, synth_blobs
from boosthd.errors import SingleClassData, TooManyLearners
from boosthd.onlinehd import TrainConfig, predict_batch
from boosthd.encoder import encode_batch


class TestPartition:
    def test_even(self):
        assert partition_dimensions(1000, 10) == [(i * 100, 100) for i in range(10)]

    def test_single(self):
        assert partition_dimensions(7, 1) == [(0, 7)]

    def test_remainder_to_first_slices(self):
        assert partition_dimensions(1000, 3) == [(0, 334), (334, 333), (667, 333)]

    def test_tiles_exactly(self):
        for d, n in ((17, 5), (1000, 7), (64, 64)):
            slices = partition_dimensions(d, n)
            assert slices[0][0] == 0
            assert sum(w for _, w in slices) == d
            for (o1, w1), (o2, _) in zip(slices, slices[1:]):
                assert o1 + w1 == o2
            assert max(w for _, w in slices) - min(w for _, w in slices) <= 1

    def test_too_many_learners(self):
        with pytest.raises(TooManyLearners):
            partition_dimensions(5, 6)
        with pytest.raises(TooManyLearners):
            BoostConfig(n_learners=6, d_total=5)


class TestBoostRounds:
    def test_hand_oracle_single_round(self):
        # 4 samples, 2 classes, stub misses only sample 3:
        # e = 0.25, alpha = ln(0.75/0.25) + ln(1) = ln 3,
        # new weights [1/6, 1/6, 1/6, 1/2]
        y = np.array([0, 0, 1, 1])
        yhat = np.array([0, 0, 1, 0])
        seen = {}

        def train_round(i, w):
            seen[i] = w
            return None, yhat

        _, alphas, diag = boost_rounds(y, 2, 2, train_round)
        assert alphas[0] == pytest.approx(math.log(3.0), abs=1e-12)
        assert diag[0]["error"] == pytest.approx(0.25, abs=1e-15)
        assert seen[1] == pytest.approx([1 / 6, 1 / 6, 1 / 6, 1 / 2], abs=1e-12)

    def test_recurrence_matches_brute_force_five_rounds(self):
        # stubbed learners with scripted mistakes; verify (e, alpha, w)
        # against an independent recomputation of the SAMME recurrence
        rng = np.random.default_rng(0)
        n, L, rounds = 6, 2, 5
        y = np.array([0, 1, 0, 1, 0, 1])
        miss_sets = [rng.choice(n, size=2, replace=False) for _ in range(rounds)]
        preds = []
        for mset in miss_sets:
            p = y.copy()
            for i in mset:
                p[i] = (y[i] + 1) % L
            preds.append(p)

        weights_seen = []

        def train_round(i, w):
            weights_seen.append(w)
            return None, preds[i]

        _, alphas, diag = boost_rounds(y, L, rounds, train_round)

        # brute-force recurrence
        w = np.full(n, 1.0 / n)
        for i in range(rounds):
            assert np.max(np.abs(weights_seen[i] - w)) < 1e-12
            mis = preds[i] != y
            e = w[mis].sum()
            assert abs(diag[i]["error"] - e) < 1e-12
            if e == 0.0:
                alpha, w = 10.0, np.full(n, 1.0 / n)
            elif e >= 1.0 - 1.0 / L:
                alpha, w = 0.0, np.full(n, 1.0 / n)
            else:
                alpha = min(max(math.log((1 - e) / e) + math.log(L - 1), 0.0), 10.0)
                w = w * np.exp(alpha * mis)
                w = w / w.sum()
            assert abs(alphas[i] - alpha) < 1e-12

    def test_perfect_round_resets_weights(self):
        y = np.array([0, 1, 0, 1])
        seen = {}

        def train_round(i, w):
            seen[i] = w
            return None, y

        _, alphas, diag = boost_rounds(y, 2, 2, train_round, alpha_cap=10.0)
        assert alphas[0] == 10.0
        assert diag[0]["branch"] == "perfect"
        assert np.array_equal(seen[1], np.full(4, 0.25))

    def test_chance_round_zero_alpha(self):
        y = np.array([0, 1, 0, 1])
        flipped = 1 - y

        def train_round(i, w):
            return None, flipped

        _, alphas, diag = boost_rounds(y, 2, 1, train_round)
        assert alphas[0] == 0.0
        assert diag[0]["branch"] == "chance"

    def test_alpha_cap_applies(self):
        # one miss with tiny weight would push alpha over the cap
        y = np.zeros(1000, dtype=np.int64)
        y[0] = 1
        yhat = np.zeros(1000, dtype=np.int64)  # misses only sample 0

        def train_round(i, w):
            return None, yhat

        _, alphas, _ = boost_rounds(y, 2, 1, train_round, alpha_cap=5.0)
        assert alphas[0] == 5.0

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassData):
            boost_rounds(np.zeros(4, dtype=np.int64), 1, 1, lambda i, w: (None, None))


def _blob_task(seed=0):
    ds = synth_blobs(3, 60, 6, 6.0, 1.0, seed)
    (ds,), _ = standardize(ds)
    return ds


class TestFitBoost:
    def test_reduction_to_single_learner_bit_identity(self):
        for seed in range(3):
            ds = _blob_task(seed)
            cfg = TrainConfig(epochs=10, shuffle_seed=seed)
            boost = fit_boost(ds.X, ds.y, BoostConfig(
                n_learners=1, d_total=600, base_train=cfg, seed=seed))
            online, _ = fit_online(ds.X, ds.y, 600, seed, cfg)
            assert np.array_equal(boost.learners[0].class_hvs, online.class_hvs)
            H = encode_batch(online.encoder, ds.X)
            assert np.array_equal(predict_boost_batch(boost, ds.X),
                                  predict_batch(online, H))

    def test_determinism(self):
        ds = _blob_task()
        cfg = BoostConfig(n_learners=5, d_total=200,
                          base_train=TrainConfig(epochs=3), seed=7)
        a = fit_boost(ds.X, ds.y, cfg)
        b = fit_boost(ds.X, ds.y, cfg)
        assert np.array_equal(a.alphas, b.alphas)
        for la, lb in zip(a.learners, b.learners):
            assert np.array_equal(la.class_hvs, lb.class_hvs)

    def test_structure_and_diagnostics(self):
        ds = _blob_task()
        model = fit_boost(ds.X, ds.y, BoostConfig(
            n_learners=4, d_total=402, base_train=TrainConfig(epochs=3), seed=0))
        assert model.n_learners == 4
        assert model.partition == [(0, 101), (101, 101), (202, 100), (302, 100)]
        assert [lrn.dim for lrn in model.learners] == [101, 101, 100, 100]
        assert len(model.diagnostics) == 4
        assert all(0.0 <= a <= 10.0 for a in model.alphas)

    def test_easy_task_high_accuracy(self):
        ds = _blob_task()
        model = fit_boost(ds.X, ds.y, BoostConfig(
            n_learners=10, d_total=1000, base_train=TrainConfig(epochs=20), seed=0))
        preds = predict_boost_batch(model, ds.X)
        assert np.mean(preds == ds.y) >= 0.99

    def test_single_class_data_rejected(self):
        X = np.random.default_rng(0).normal(size=(10, 4))
        with pytest.raises(SingleClassData):
            fit_boost(X, np.zeros(10, dtype=np.int64), BoostConfig(
                n_learners=2, d_total=20, base_train=TrainConfig(epochs=1)))


class TestVoting:
    def test_weighted_vote(self):
        class Stub:
            alphas = np.array([0.5, 1.5, 1.0])
            n_classes = 2

        scores = vote_scores(Stub(), [0, 1, 0])
        assert scores == pytest.approx([1.5, 1.5])

    def test_predict_tie_breaks_low_index(self):
        ds = _blob_task()
        model = fit_boost(ds.X, ds.y, BoostConfig(
            n_learners=2, d_total=100, base_train=TrainConfig(epochs=2), seed=0))
        label, scores = predict_boost(model, ds.X[0])
        assert label == int(np.argmax(scores))
        assert scores.shape == (model.n_classes,)
        assert scores.sum() == pytest.approx(model.alphas.sum())
