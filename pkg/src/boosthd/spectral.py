"""Marchenko-Pastur statistics of the Gaussian encoding kernel.

Implements the closed-form mean/variance approximations of the eigenvalue
law verbatim (including the log singularity of the variance formula at
q = 1), a quadrature oracle for the exact bulk moments, empirical
spectra of sampled matrices, the limit terms of the variance expansion,
and span utilization of class hypervectors.

q is the ratio of columns to rows (N_c / N_r) of the kernel matrix; the
eigenvalues are those of the sample covariance (1/N_r) K^T K.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import (
    DecompositionFailure,
    InvalidParams,
    LogSingularity,
    QuadratureFailure,
    ZeroNormRow,
)

DEFAULT_RANK_TOL = 1e-10
_PI_FLOOR = 1e-6


@dataclass(frozen=True)
class MPParams:
    """Aspect ratio q = N_c / N_r and entry standard deviation sigma."""

    q: float
    sigma: float = 1.0

    def __post_init__(self):
        if self.q <= 0 or self.sigma <= 0:
            raise InvalidParams(f"q and sigma must be positive, got q={self.q}, sigma={self.sigma}")


@dataclass(frozen=True)
class SpectralStats:
    """Summary of an empirical covariance spectrum."""

    lambda_min: float
    lambda_max: float
    mean: float
    variance: float
    axis_ratio: float


@dataclass(frozen=True)
class SpanReport:
    """Span utilization of a set of class hypervectors."""

    numeric_rank: int
    rank_fraction: float
    attenuation: float
    sp: float
    pairwise_sims: np.ndarray
    degenerate: bool


def mp_bounds(p):
    """Support edges of the eigenvalue bulk: sigma^2 (1 -/+ sqrt(q))^2."""
    s2 = p.sigma ** 2
    root = math.sqrt(p.q)
    return s2 * (1.0 - root) ** 2, s2 * (1.0 + root) ** 2


def mp_mean_approx(p):
    """Closed-form mean approximation (1 / (3 pi q)) (l_max - l_min)^(3/2).

    Note this is an approximation that deviates from the exact bulk mean
    (which is sigma^2 for q <= 1); compare against mp_moments_numeric.
    """
    lo, hi = mp_bounds(p)
    return (hi - lo) ** 1.5 / (3.0 * math.pi * p.q)


def mp_variance_approx(p):
    """Closed-form variance approximation.

    Evaluated verbatim, so q = 1 (where l_min = 0) raises LogSingularity
    instead of silently regularizing the logarithm.
    """
    lo, hi = mp_bounds(p)
    if lo == 0.0:
        raise LogSingularity("variance formula has ln(l_min) with l_min = 0 at q = 1")
    mu = mp_mean_approx(p)
    terms = (
        0.5 * (hi ** 2 - lo ** 2)
        - 2.0 * mu * (hi - lo)
        + mu ** 2 * (math.log(abs(hi)) - math.log(abs(lo)))
    )
    return terms / (2.0 * math.pi * p.sigma ** 2 * p.q)


def _bulk_moment(p, power, tol):
    """Integral of f(l) l^power over the bulk via the substitution
    l = l_min + (l_max - l_min) sin^2(t), which removes both endpoint
    square-root singularities and the 1/l pole at q = 1."""
    lo, hi = mp_bounds(p)
    span = hi - lo
    c = span ** 2 / (2.0 * math.pi * p.sigma ** 2 * p.q)

    def integrand(t):
        s2 = math.sin(t) ** 2
        lam = lo + span * s2
        # f(l) sqrt term * dl collapses to 2 sin^2 t cos^2 t * span^2 / l
        val = c * 2.0 * s2 * math.cos(t) ** 2 / lam if lam > 0 else 0.0
        if lam == 0.0 and lo == 0.0:
            # limit as t -> 0 when l_min = 0: l = span sin^2 t cancels
            val = c * 2.0 * math.cos(t) ** 2 / span
        return val * lam ** power

    result, abserr = integrate.quad(integrand, 0.0, math.pi / 2.0,
                                    epsabs=tol, epsrel=tol, limit=200)
    if abserr > max(tol, abs(result) * tol * 10):
        raise QuadratureFailure(
            f"quadrature error {abserr} exceeds tolerance {tol} for moment {power}"
        )
    return result


def mp_moments_numeric(p, tol=1e-9):
    """Exact (mean, variance) of the eigenvalue law by adaptive quadrature.

    For q > 1 the point mass at zero with weight 1 - 1/q is included, so
    the moments describe the full distribution, not just the bulk.
    """
    m1 = _bulk_moment(p, 1, tol)
    m2 = _bulk_moment(p, 2, tol)
    # bulk integrates to min(1, 1/q); the q > 1 point mass at 0 adds nothing
    return m1, m2 - m1 ** 2


def empirical_spectrum(matrix):
    """Spectral statistics of the sample covariance of a real matrix.

    The eigenvalues of (1/N_r) K^T K are the squared singular values of K
    over N_r; axis_ratio is the smallest-to-largest singular value ratio.
    """
    K = np.asarray(matrix, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] < 2 or K.shape[1] < 2:
        raise InvalidParams(f"need an (N_r >= 2, N_c >= 2) matrix, got shape {K.shape}")
    try:
        svals = np.linalg.svd(K, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    n_r, n_c = K.shape
    evals = np.zeros(n_c)
    evals[: svals.shape[0]] = svals ** 2 / n_r
    return SpectralStats(
        lambda_min=float(evals.min()),
        lambda_max=float(evals.max()),
        mean=float(evals.mean()),
        variance=float(evals.var()),
        axis_ratio=float(svals.min() / svals.max()) if svals.max() > 0 else 0.0,
    )


def limit_terms(q):
    """The three scaled variance terms at sigma = 1, mu = mp_mean_approx.

    t2 and t3 shrink toward zero as q grows while t1 stays finite, which
    is what makes the eigenvalue variance settle to a constant.
    """
    p = MPParams(q=q, sigma=1.0)
    lo, hi = mp_bounds(p)
    if lo == 0.0:
        raise LogSingularity("limit terms undefined at q = 1 (l_min = 0)")
    mu = mp_mean_approx(p)
    t1 = (hi ** 2 - lo ** 2) / q
    t2 = -2.0 * mu * (hi - lo) / q
    t3 = mu ** 2 * (math.log(abs(hi)) - math.log(abs(lo))) / q
    return t1, t2, t3


def span_utilization(class_hvs, rank_tolerance=DEFAULT_RANK_TOL):
    """Span utilization of an (L, D) class-hypervector matrix.

    numeric rank counts singular values above rank_tolerance times the
    largest; per-class attenuation pi_i = 1 - mean |cos sim| to the other
    classes, floored at 1e-6; sp = (rank / D) / prod(pi_i).
    """
    C = np.asarray(class_hvs, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] < 1:
        raise InvalidParams(f"need an (L, D) matrix, got shape {C.shape}")
    norms = np.linalg.norm(C, axis=1)
    if np.any(norms == 0):
        raise ZeroNormRow("class hypervector rows must have positive norm")
    L, D = C.shape
    try:
        svals = np.linalg.svd(C, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    rank = int(np.sum(svals > rank_tolerance * svals.max())) if svals.max() > 0 else 0

    unit = C / norms[:, None]
    sims = unit @ unit.T
    np.clip(sims, -1.0, 1.0, out=sims)

    pis = np.ones(L)
    degenerate = False
    if L > 1:
        off = np.abs(sims) - np.eye(L)  # diagonal removed from the mean
        for i in range(L):
            mean_off = (off[i].sum()) / (L - 1)
            pis[i] = max(1.0 - mean_off, _PI_FLOOR)
            if pis[i] == _PI_FLOOR:
                degenerate = True
    attenuation = float(np.prod(pis))
    rank_fraction = rank / D
    return SpanReport(
        numeric_rank=rank,
        rank_fraction=float(rank_fraction),
        attenuation=attenuation,
        sp=float(rank_fraction / attenuation),
        pairwise_sims=sims,
        degenerate=degenerate,
    )
