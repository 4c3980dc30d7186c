"""Weak-learner training and prediction contracts."""

import numpy as np
import pytest

from boosthd import encode_batch, init_encoder
from boosthd.data import synth_blobs, standardize, split_by_subject
from boosthd.errors import (
    AllZeroWeights,
    DegenerateEncoding,
    DimensionMismatch,
    NegativeWeight,
    UntrainedClass,
)
from boosthd.onlinehd import OnlineHDModel, TrainConfig, fit, predict, predict_batch


def _model_with_rows(rows, lr=0.035):
    rows = np.asarray(rows, dtype=np.float32)
    return OnlineHDModel(class_hvs=rows, lr=lr, n_classes=rows.shape[0],
                         dim=rows.shape[1])


class TestPredict:
    def test_axis_alignment(self):
        m = _model_with_rows([[1, 0], [0, 1]])
        label, scores = predict(m, [1, 0])
        assert label == 0
        assert scores == pytest.approx([1.0, 0.0])

    def test_tie_breaks_to_lowest_index(self):
        m = _model_with_rows([[1, 0], [1, 0]])
        label, _ = predict(m, [1, 0])
        assert label == 0

    def test_scale_invariant_label(self):
        rng = np.random.default_rng(0)
        m = _model_with_rows(rng.normal(size=(3, 40)))
        h = rng.normal(size=40)
        base = predict(m, h)[0]
        assert predict(m, 1e3 * h)[0] == base
        assert predict(m, 1e-3 * h)[0] == base

    def test_degenerate_query(self):
        m = _model_with_rows([[1, 0], [0, 1]])
        with pytest.raises(DegenerateEncoding):
            predict(m, [0, 0])

    def test_untrained_class(self):
        m = _model_with_rows([[1, 0], [0, 0]])
        with pytest.raises(UntrainedClass):
            predict(m, [1, 0])

    def test_dimension_mismatch(self):
        m = _model_with_rows([[1, 0], [0, 1]])
        with pytest.raises(DimensionMismatch):
            predict(m, [1, 0, 0])

    def test_nan_class_excluded(self):
        m = _model_with_rows([[np.nan, 1.0], [0, 1]])
        label, scores = predict(m, [0, 1])
        assert label == 1
        assert np.isnan(scores[0])


class TestFit:
    def _toy(self, seed=0, n=60, d=200):
        rng = np.random.default_rng(seed)
        H = np.vstack([rng.normal(1.0, 0.3, size=(n // 2, d)),
                       rng.normal(-1.0, 0.3, size=(n // 2, d))]).astype(np.float32)
        y = np.array([0] * (n // 2) + [1] * (n // 2))
        return H, y

    def test_single_class_degenerate(self):
        H = np.abs(np.random.default_rng(0).normal(size=(1, 50))).astype(np.float32)
        m = OnlineHDModel.empty(1, 50)
        trained, err = fit(m, H, [0], None, TrainConfig(epochs=2))
        assert err == 0.0
        assert predict(trained, H[0])[0] == 0

    def test_uniform_weights_equal_unweighted(self):
        H, y = self._toy()
        m = OnlineHDModel.empty(2, H.shape[1])
        cfg = TrainConfig(epochs=3, shuffle_seed=1)
        a, ea = fit(m, H, y, None, cfg)
        b, eb = fit(m, H, y, np.full(len(y), 1.0 / len(y)), cfg)
        c, ec = fit(m, H, y, np.full(len(y), 7.0), cfg)
        assert np.array_equal(a.class_hvs, b.class_hvs)
        assert np.array_equal(a.class_hvs, c.class_hvs)
        assert ea == eb == ec

    def test_weight_scaling_invariance(self):
        H, y = self._toy(3)
        rng = np.random.default_rng(5)
        w = rng.random(len(y)) + 0.1
        m = OnlineHDModel.empty(2, H.shape[1])
        cfg = TrainConfig(epochs=3, shuffle_seed=2)
        base, _ = fit(m, H, y, w, cfg)
        for c in (0.5, 2.0, 1024.0):  # powers of two scale exactly
            scaled, _ = fit(m, H, y, c * w, cfg)
            assert np.array_equal(base.class_hvs, scaled.class_hvs)

    def test_error_in_unit_interval_and_fixed_point(self):
        H, y = self._toy(7)
        m = OnlineHDModel.empty(2, H.shape[1])
        cfg = TrainConfig(epochs=10, shuffle_seed=0)
        trained, err = fit(m, H, y, None, cfg)
        assert 0.0 <= err <= 1.0
        if err == 0.0:
            # a model with zero training error is a fixed point of more epochs
            again, err2 = fit(trained, H, y, None, TrainConfig(epochs=5, shuffle_seed=9))
            # note: fit restarts from the given model's hypervectors; since no
            # sample is misclassified, only the init bundling would move it,
            # so instead verify update idempotence via unchanged predictions
            assert err2 == 0.0

    def test_negative_and_zero_weights(self):
        H, y = self._toy()
        m = OnlineHDModel.empty(2, H.shape[1])
        with pytest.raises(NegativeWeight):
            fit(m, H, y, -np.ones(len(y)), TrainConfig(epochs=1))
        with pytest.raises(AllZeroWeights):
            fit(m, H, y, np.zeros(len(y)), TrainConfig(epochs=1))

    def test_separable_blobs_low_error_vs_centroid_oracle(self):
        # reproducible across 10 seeds; weighted training error <= 0.01
        for seed in range(10):
            ds = synth_blobs(2, 40, 6, 20.0, 1.0, seed)
            (ds,), _ = standardize(ds)
            p = init_encoder(6, 500, seed)
            H = encode_batch(p, ds.X)
            m = OnlineHDModel.empty(2, 500)
            trained, err = fit(m, H, ds.y, None, TrainConfig(epochs=20, shuffle_seed=seed))
            assert err <= 0.01
            # nearest-centroid oracle in encoded space agrees on nearly all
            centroids = np.stack([H[ds.y == c].mean(axis=0) for c in range(2)])
            dists = ((H[:, None, :] - centroids[None]) ** 2).sum(axis=2)
            oracle = dists.argmin(axis=1)
            preds = predict_batch(trained, H)
            assert np.mean(preds == oracle) > 0.98

    def test_two_blob_training_accuracy_100(self):
        ds = synth_blobs(2, 50, 6, 20.0, 1.0, 0)
        (ds,), _ = standardize(ds)
        p = init_encoder(6, 500, 0)
        H = encode_batch(p, ds.X)
        m = OnlineHDModel.empty(2, 500)
        trained, err = fit(m, H, ds.y, None, TrainConfig(epochs=20, shuffle_seed=0))
        preds = predict_batch(trained, H)
        assert np.array_equal(preds, ds.y)
