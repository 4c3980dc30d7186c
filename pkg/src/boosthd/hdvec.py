"""Dense hypervector primitives: bundling, binding, permutation, similarity.

Hypervectors are plain 1-D numpy arrays of finite reals.  All operations
are pure and never mutate their inputs.
"""

import numpy as np

from .errors import DimensionMismatch, EmptyInput, NonFiniteInput, ZeroNormVector


def as_hypervector(v):
    """Coerce to a 1-D float array and validate finiteness."""
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise DimensionMismatch(f"hypervector must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInput("hypervector must have at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("hypervector contains NaN or Inf")
    return arr


def cosine_similarity(a, b):
    """Cosine of the angle between two hypervectors, in [-1, 1].

    Raises:
        DimensionMismatch: dimensions differ.
        ZeroNormVector: either argument has zero norm (degenerate encoding).
    """
    a = as_hypervector(a)
    b = as_hypervector(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"dims differ: {a.shape[0]} vs {b.shape[0]}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormVector("cosine similarity undefined for zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def bundle(vs):
    """Elementwise sum of a non-empty list of hypervectors.

    Summation is index-ascending so results are bit-reproducible.
    """
    if len(vs) == 0:
        raise EmptyInput("bundle requires at least one hypervector")
    vs = [as_hypervector(v) for v in vs]
    dim = vs[0].shape[0]
    for v in vs[1:]:
        if v.shape[0] != dim:
            raise DimensionMismatch("bundle inputs must share one dimension")
    out = vs[0].astype(np.result_type(*vs), copy=True)
    for v in vs[1:]:
        out = out + v
    return out


def bind(a, b):
    """Elementwise product; near-orthogonal to both inputs for random vectors."""
    a = as_hypervector(a)
    b = as_hypervector(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"dims differ: {a.shape[0]} vs {b.shape[0]}")
    return a * b


def permute(v, k=1):
    """Circular right-rotation by k positions (k may be any integer)."""
    v = as_hypervector(v)
    return np.roll(v, k)
