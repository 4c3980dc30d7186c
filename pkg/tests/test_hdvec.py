"""Hypervector primitive contracts and statistical properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from boosthd import bind, bundle, cosine_similarity, permute
from boosthd.errors import DimensionMismatch, EmptyInput, ZeroNormVector

# 32/(sqrt(14)*sqrt(77)) to 40 digits, frozen from an arbitrary-precision check
COS_123_456 = 0.9746318461970762


class TestCosineSimilarity:
    def test_identical(self):
        assert cosine_similarity([1, 0, 0], [1, 0, 0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity([1, 0], [0, 1]) == 0.0

    def test_oracle_value(self):
        assert cosine_similarity([1, 2, 3], [4, 5, 6]) == pytest.approx(
            COS_123_456, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_similarity([1, 2], [1, 2, 3])

    def test_zero_norm(self):
        with pytest.raises(ZeroNormVector):
            cosine_similarity([0, 0], [1, 2])

    def test_scale_invariance(self):
        rng = np.random.default_rng(0)
        v = rng.normal(size=64)
        for c in (0.5, 3.0, 1e6):
            assert abs(cosine_similarity(v, c * v) - 1.0) < 1e-12

    @given(arrays(np.float64, 16, elements=st.floats(-100, 100)),
           arrays(np.float64, 16, elements=st.floats(-100, 100)))
    def test_symmetry(self, a, b):
        if np.linalg.norm(a) == 0 or np.linalg.norm(b) == 0:
            return
        assert abs(cosine_similarity(a, b) - cosine_similarity(b, a)) < 1e-15


class TestBundle:
    def test_two_elements(self):
        assert np.array_equal(bundle([[1, 2], [3, 4]]), [4, 6])

    def test_singleton(self):
        assert np.array_equal(bundle([[5, 5]]), [5, 5])

    def test_additive_inverse(self):
        assert np.array_equal(bundle([[1, 1], [-1, -1]]), [0, 0])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            bundle([])

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            bundle([[1, 2], [1, 2, 3]])

    def test_preserves_similarity_to_constituents(self):
        # at D = 4000 the bundle stays positively aligned with each input
        hits = 0
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            a, b = rng.normal(size=4000), rng.normal(size=4000)
            if cosine_similarity(bundle([a, b]), a) > 0:
                hits += 1
        assert hits >= 990


class TestBind:
    def test_sign_algebra(self):
        assert np.array_equal(bind([1, -1], [-1, -1]), [-1, 1])

    def test_multiplicative_identity(self):
        v = np.array([0.5, -2.0, 3.0])
        assert np.array_equal(bind(v, np.ones(3)), v)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            bind([1, 2], [1, 2, 3])

    def test_near_orthogonal_to_inputs(self):
        # Monte Carlo: |cos(bind(a,b), a)| < 0.05 in >= 99% of seeds
        hits = 0
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            a, b = rng.normal(size=10000), rng.normal(size=10000)
            if abs(cosine_similarity(bind(a, b), a)) < 0.05:
                hits += 1
        assert hits >= 990


class TestPermute:
    def test_right_rotation(self):
        assert np.array_equal(permute([1, 2, 3], 1), [3, 1, 2])

    def test_identity(self):
        assert np.array_equal(permute([1, 2, 3], 0), [1, 2, 3])

    def test_full_cycle(self):
        assert np.array_equal(permute([1, 2, 3], 3), [1, 2, 3])

    def test_round_trip_exact(self):
        rng = np.random.default_rng(1)
        v = rng.normal(size=257)
        for k in (-5, 1, 7, 300):
            assert np.array_equal(permute(permute(v, k), -k), v)

    def test_bijection_d_applications(self):
        rng = np.random.default_rng(2)
        v = rng.normal(size=64)
        out = v
        for _ in range(64):
            out = permute(out, 1)
        assert np.array_equal(out, v)

    def test_near_orthogonality_of_shift(self):
        # E[|cos(v, rot(v))|] < 2 / sqrt(D) at D = 4000
        vals = []
        for seed in range(100):
            rng = np.random.default_rng(seed)
            v = rng.normal(size=4000)
            vals.append(abs(cosine_similarity(v, permute(v, 1))))
        assert np.mean(vals) < 2.0 / np.sqrt(4000)
