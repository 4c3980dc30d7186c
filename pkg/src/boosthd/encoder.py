"""Nonlinear random-projection encoder into hyperspace.

Feature vectors are projected through a fixed Gaussian basis and passed
through a trigonometric activation.  The canonical activation for a
projection value u with phase b is cos(u + b) * sin(u); a pure-cosine
variant cos(u + b) is available for ablation.

All encoder state is float32 so that serialized models round-trip
losslessly.  The RNG is numpy's default_rng (PCG64) with explicit 64-bit
seeding; golden files depend on this generator staying fixed.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput, ZeroDimension

ACTIVATIONS = ("cos_sin", "cos")

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class EncoderParams:
    """Immutable random-projection parameters.

    Attributes:
        basis: (in_features, out_dim) float32 matrix, entries i.i.d. N(0, 1).
        phases: (out_dim,) float32 vector, entries i.i.d. Uniform[0, 2pi).
        in_features: number of input features F.
        out_dim: hyperspace dimension D.
        seed: the 64-bit seed the parameters were generated from.
        activation: "cos_sin" (canonical) or "cos" (ablation).
    """

    basis: np.ndarray = field(repr=False)
    phases: np.ndarray = field(repr=False)
    in_features: int
    out_dim: int
    seed: int
    activation: str = "cos_sin"


def init_encoder(in_features, out_dim, seed, activation="cos_sin"):
    """Deterministically generate encoder parameters from a seed."""
    if in_features < 1 or out_dim < 1:
        raise ZeroDimension(
            f"in_features and out_dim must be >= 1, got {in_features}, {out_dim}"
        )
    if activation not in ACTIVATIONS:
        raise ValueError(f"unknown activation {activation!r}, expected one of {ACTIVATIONS}")
    rng = np.random.default_rng(seed)
    basis = rng.standard_normal((in_features, out_dim)).astype(np.float32)
    phases = (rng.random(out_dim) * _TWO_PI).astype(np.float32)
    # float32 rounding can push a value up to 2*pi; keep the half-open interval
    limit = np.nextafter(np.float32(_TWO_PI), np.float32(0.0))
    np.minimum(phases, limit, out=phases)
    return EncoderParams(
        basis=basis,
        phases=phases,
        in_features=int(in_features),
        out_dim=int(out_dim),
        seed=int(seed),
        activation=activation,
    )


def _activate(u, phases, activation):
    if activation == "cos_sin":
        return np.cos(u + phases) * np.sin(u)
    return np.cos(u + phases)


def encode(params, x):
    """Encode one feature vector into a (out_dim,) float32 hypervector."""
    x = np.asarray(x, dtype=np.float32)
    if x.ndim != 1 or x.shape[0] != params.in_features:
        raise DimensionMismatch(
            f"expected feature vector of length {params.in_features}, got shape {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("feature vector contains NaN or Inf")
    u = x @ params.basis
    return _activate(u, params.phases, params.activation)


def encode_batch(params, X):
    """Encode an (N, F) matrix row by row.

    Each row goes through the exact same matrix-vector path as encode(),
    so batch output is bit-identical to N individual encodes regardless
    of N or thread count.
    """
    X = np.asarray(X, dtype=np.float32)
    if X.ndim != 2 or (X.shape[0] > 0 and X.shape[1] != params.in_features):
        raise DimensionMismatch(
            f"expected (N, {params.in_features}) matrix, got shape {X.shape}"
        )
    out = np.empty((X.shape[0], params.out_dim), dtype=np.float32)
    for i in range(X.shape[0]):
        out[i] = encode(params, X[i])
    return out
