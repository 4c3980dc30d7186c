"""Bit-flip fault injection and the MAD robustness statistic.

Faults target the stored float32 class hypervectors: each of the 32 bits
of every element flips independently with probability p_b.  The flip
pattern for a given (seed, trial, array) is drawn from its own RNG
stream in one fixed-shape pass, so it does not depend on evaluation
order or parallelism.  NaN / Inf survivors are kept; prediction treats a
NaN class score as minus infinity.
"""

from dataclasses import dataclass, replace

import numpy as np

from .boost import BoostHDModel
from .errors import EmptyInput, InvalidProbability, NonFinite
from .onlinehd import OnlineHDModel

_ENCODER_KEY_BASE = 100000


@dataclass(frozen=True)
class PerturbConfig:
    """Fault-injection parameters."""

    p_b: float
    trials: int = 100
    seed: int = 0
    include_encoder: bool = False  # default: faults hit learned memory only

    def __post_init__(self):
        if not 0.0 <= self.p_b <= 1.0:
            raise InvalidProbability(f"p_b must lie in [0, 1], got {self.p_b}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def _flip_float32(arr, p_b, rng):
    """Return a copy of a float32 array with independent per-bit flips."""
    if p_b == 0.0:
        return arr.copy()
    flat = np.ascontiguousarray(arr, dtype=np.float32).ravel()
    words = flat.view(np.uint32).copy()
    bits = rng.random((words.size, 32)) < p_b
    mask = (bits.astype(np.uint64) << np.arange(32, dtype=np.uint64)).sum(axis=1)
    words ^= mask.astype(np.uint32)
    return words.view(np.float32).reshape(arr.shape).copy()


def bitflip_model(model, cfg, trial=0):
    """Perturbed deep copy of a model; the original is never touched."""
    if isinstance(model, BoostHDModel):
        learners = []
        for i, learner in enumerate(model.learners):
            rng = np.random.default_rng([cfg.seed, trial, i])
            learners.append(
                replace(learner, class_hvs=_flip_float32(learner.class_hvs, cfg.p_b, rng))
            )
        encoder = model.encoder
        if cfg.include_encoder:
            rng = np.random.default_rng([cfg.seed, trial, _ENCODER_KEY_BASE])
            encoder = replace(
                encoder,
                basis=_flip_float32(encoder.basis, cfg.p_b, rng),
                phases=_flip_float32(encoder.phases, cfg.p_b, rng),
            )
        return replace(model, learners=learners, encoder=encoder,
                       alphas=model.alphas.copy())
    if isinstance(model, OnlineHDModel):
        rng = np.random.default_rng([cfg.seed, trial, 0])
        out = replace(model, class_hvs=_flip_float32(model.class_hvs, cfg.p_b, rng))
        if cfg.include_encoder and model.encoder is not None:
            rng = np.random.default_rng([cfg.seed, trial, _ENCODER_KEY_BASE])
            out = replace(
                out,
                encoder=replace(
                    model.encoder,
                    basis=_flip_float32(model.encoder.basis, cfg.p_b, rng),
                    phases=_flip_float32(model.encoder.phases, cfg.p_b, rng),
                ),
            )
        return out
    raise TypeError(f"cannot perturb {type(model).__name__}")


def stored_class_arrays(model):
    """The float32 arrays a fault campaign targets, in a fixed order."""
    if isinstance(model, BoostHDModel):
        return [m.class_hvs for m in model.learners]
    if isinstance(model, OnlineHDModel):
        return [model.class_hvs]
    raise TypeError(f"unsupported model {type(model).__name__}")


def count_flipped_bits(model_a, model_b):
    """Hamming distance between the stored class-hypervector bytes."""
    total = 0
    for a, b in zip(stored_class_arrays(model_a), stored_class_arrays(model_b)):
        xa = np.ascontiguousarray(a, dtype=np.float32).ravel().view(np.uint32)
        xb = np.ascontiguousarray(b, dtype=np.float32).ravel().view(np.uint32)
        diff = xa ^ xb
        total += int(np.bitwise_count(diff).sum())
    return total


def mad(values):
    """Median absolute deviation from the median.

    The median of an even-length list is the mean of the two central
    order statistics.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyInput("mad of an empty list is undefined")
    if not np.all(np.isfinite(v)):
        raise NonFinite("mad requires finite values")
    med = np.median(v)
    return float(np.median(np.abs(v - med)))
