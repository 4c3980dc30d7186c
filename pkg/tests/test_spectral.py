"""Eigenvalue-law statistics: closed forms, quadrature, empirical spectra."""

import numpy as np
import pytest

from boosthd.errors import InvalidParams, LogSingularity, ZeroNormRow
from boosthd.spectral import (
    MPParams,
    empirical_spectrum,
    limit_terms,
    mp_bounds,
    mp_mean_approx,
    mp_moments_numeric,
    mp_variance_approx,
    span_utilization,
)

# closed forms evaluated at 40-digit precision and frozen
MEAN_APPROX_Q1 = 0.8488263631567751        # (1/(3 pi)) * 4^1.5
MEAN_APPROX_Q025 = 1.200421754876141       # (1/(0.75 pi)) * 2^1.5
VAR_APPROX_Q025 = 0.5503837794747428


class TestBounds:
    def test_q_quarter(self):
        lo, hi = mp_bounds(MPParams(q=0.25))
        assert lo == pytest.approx(0.25, abs=1e-15)
        assert hi == pytest.approx(2.25, abs=1e-15)

    def test_q_one_touches_zero(self):
        lo, hi = mp_bounds(MPParams(q=1.0))
        assert lo == 0.0
        assert hi == pytest.approx(4.0, abs=1e-15)

    def test_sigma_scaling(self):
        lo1, hi1 = mp_bounds(MPParams(q=0.5, sigma=1.0))
        lo2, hi2 = mp_bounds(MPParams(q=0.5, sigma=3.0))
        assert lo2 == pytest.approx(9 * lo1, rel=1e-14)
        assert hi2 == pytest.approx(9 * hi1, rel=1e-14)

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            MPParams(q=0.0)
        with pytest.raises(InvalidParams):
            MPParams(q=1.0, sigma=-1.0)


class TestClosedForms:
    def test_mean_approx_frozen_values(self):
        assert mp_mean_approx(MPParams(q=1.0)) == pytest.approx(
            MEAN_APPROX_Q1, rel=1e-12)
        assert mp_mean_approx(MPParams(q=0.25)) == pytest.approx(
            MEAN_APPROX_Q025, rel=1e-12)

    def test_variance_approx_frozen_value(self):
        assert mp_variance_approx(MPParams(q=0.25)) == pytest.approx(
            VAR_APPROX_Q025, rel=1e-12)

    def test_variance_singularity_at_q_one(self):
        with pytest.raises(LogSingularity):
            mp_variance_approx(MPParams(q=1.0))


class TestNumericMoments:
    @pytest.mark.parametrize("q", [0.1, 0.25, 0.5, 1.0])
    def test_moment_identities_sigma_one(self, q):
        mean, var = mp_moments_numeric(MPParams(q=q))
        assert mean == pytest.approx(1.0, abs=1e-6)
        assert var == pytest.approx(q, abs=1e-6)

    def test_sigma_scaling(self):
        mean, var = mp_moments_numeric(MPParams(q=0.5, sigma=2.0))
        assert mean == pytest.approx(4.0, abs=1e-5)
        assert var == pytest.approx(0.5 * 16.0, abs=1e-4)

    def test_approximations_deviate_from_exact(self):
        # the closed forms are approximations, not the exact moments
        assert abs(mp_mean_approx(MPParams(q=0.25)) - 1.0) > 0.1


class TestEmpiricalSpectrum:
    def test_matches_quadrature_mean(self):
        devs = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            K = rng.standard_normal((2000, 500))
            stats = empirical_spectrum(K)
            devs.append(abs(stats.mean - 1.0))
        assert np.mean(devs) < 0.03

    def test_axis_ratio_increases_with_rows(self):
        means = []
        for n_r in (500, 1000, 2000, 4000):
            vals = []
            for seed in range(10):
                rng = np.random.default_rng(seed)
                vals.append(empirical_spectrum(
                    rng.standard_normal((n_r, 100))).axis_ratio)
            means.append(np.mean(vals))
        assert all(a < b for a, b in zip(means, means[1:]))
        assert means[-1] < 1.0

    def test_wide_matrix_padded_zeros(self):
        rng = np.random.default_rng(0)
        stats = empirical_spectrum(rng.standard_normal((10, 50)))
        assert stats.lambda_min == 0.0

    def test_identity_matrix(self):
        stats = empirical_spectrum(np.eye(4))
        assert stats.axis_ratio == pytest.approx(1.0)
        assert stats.variance == pytest.approx(0.0, abs=1e-15)

    def test_shape_validation(self):
        with pytest.raises(InvalidParams):
            empirical_spectrum(np.ones(5))
        with pytest.raises(InvalidParams):
            empirical_spectrum(np.ones((1, 5)))


class TestLimitTerms:
    def test_trends_over_large_q(self):
        rows = [limit_terms(q) for q in (10.0, 100.0, 1000.0)]
        t2 = [abs(r[1]) for r in rows]
        t3 = [abs(r[2]) for r in rows]
        assert t2[0] > t2[1] > t2[2]
        assert t3[0] > t3[1] > t3[2]
        for r in rows:
            assert np.isfinite(r[0])

    def test_singular_at_q_one(self):
        with pytest.raises(LogSingularity):
            limit_terms(1.0)


class TestSpanUtilization:
    def test_orthogonal_classes_sp_equals_rank_fraction(self):
        C = np.eye(2, 10)
        report = span_utilization(C)
        assert report.numeric_rank == 2
        assert report.attenuation == pytest.approx(1.0)
        assert report.sp == pytest.approx(report.rank_fraction)
        assert report.sp == pytest.approx(0.2)

    def test_duplicate_rows_degenerate(self):
        C = np.ones((2, 8))
        report = span_utilization(C)
        assert report.numeric_rank == 1
        assert report.degenerate
        assert report.attenuation == pytest.approx(1e-12, rel=1e-6)

    def test_known_similarity(self):
        # rows at 45 degrees: mean |off-diagonal sim| = cos 45
        C = np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
        report = span_utilization(C)
        s = 1.0 / np.sqrt(2.0)
        assert report.numeric_rank == 2
        assert report.attenuation == pytest.approx((1 - s) ** 2, rel=1e-12)
        assert report.sp == pytest.approx((2 / 3) / (1 - s) ** 2, rel=1e-12)

    def test_pairwise_matrix_properties(self):
        rng = np.random.default_rng(0)
        C = rng.normal(size=(4, 50))
        report = span_utilization(C)
        sims = report.pairwise_sims
        assert np.allclose(np.diag(sims), 1.0)
        assert np.allclose(sims, sims.T)
        assert np.all(np.abs(sims) <= 1.0)

    def test_zero_row_rejected(self):
        with pytest.raises(ZeroNormRow):
            span_utilization(np.array([[1.0, 0.0], [0.0, 0.0]]))

    def test_single_class(self):
        report = span_utilization(np.ones((1, 4)))
        assert report.numeric_rank == 1
        assert report.attenuation == 1.0
        assert not report.degenerate
