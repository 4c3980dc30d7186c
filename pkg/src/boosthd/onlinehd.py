"""OnlineHD-style weak learner.

One class hypervector per label, trained by similarity-guided adaptive
updates: a misclassified sample reinforces its true class and penalizes
the wrongly predicted class, each scaled by (1 - similarity).  Per-sample
weights enter as multiplicative factors N * w_i on the update magnitude,
so uniform weights reproduce the unweighted fit exactly.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    AllZeroWeights,
    DegenerateEncoding,
    DimensionMismatch,
    NegativeWeight,
    UntrainedClass,
)

DEFAULT_LR = 0.035
DEFAULT_EPOCHS = 20


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters for one weak learner."""

    epochs: int = DEFAULT_EPOCHS
    lr: float = DEFAULT_LR
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lr <= 0:
            raise ValueError("lr must be positive")


@dataclass
class OnlineHDModel:
    """Class hypervectors over a D-dimensional (slice of) hyperspace.

    Attributes:
        class_hvs: (n_classes, dim) float32 matrix, one row per class.
        lr: learning rate used during training.
        n_classes: number of labels L.
        dim: hypervector dimension of this learner.
        encoder: optional EncoderParams for standalone use; None when the
            learner operates on a slice of a shared ensemble encoder.
    """

    class_hvs: np.ndarray
    lr: float
    n_classes: int
    dim: int
    encoder: object = None

    @classmethod
    def empty(cls, n_classes, dim, lr=DEFAULT_LR, encoder=None):
        return cls(
            class_hvs=np.zeros((n_classes, dim), dtype=np.float32),
            lr=float(lr),
            n_classes=int(n_classes),
            dim=int(dim),
            encoder=encoder,
        )

    def copy(self):
        return replace(self, class_hvs=self.class_hvs.copy())


def _row_norms(class_hvs):
    # per-row np.linalg.norm so incremental updates recompute identically
    return np.array(
        [np.linalg.norm(class_hvs[i]) for i in range(class_hvs.shape[0])],
        dtype=np.float32,
    )


def _train_scores(class_hvs, norms, h, h_norm):
    """Similarities for training: untrained (zero-norm) classes score -inf
    for the argmax but contribute delta = 0 to update magnitudes."""
    raw = class_hvs @ h
    sims = np.zeros(class_hvs.shape[0], dtype=np.float32)
    active = norms > 0
    sims[active] = raw[active] / (norms[active] * h_norm)
    argmax_scores = np.where(active, sims, -np.inf)
    return sims, argmax_scores


def predict(model, h):
    """Predict the class of one encoded query.

    Returns:
        (label, scores) where scores[l] is the cosine similarity of the
        query to class l.  Ties break toward the lowest class index.
        NaN scores (possible after fault injection) never win the argmax.
    """
    h = np.asarray(h)
    if h.ndim != 1 or h.shape[0] != model.dim:
        raise DimensionMismatch(f"expected query of dim {model.dim}, got shape {h.shape}")
    h_norm = np.linalg.norm(h)
    if h_norm == 0:
        raise DegenerateEncoding("query hypervector has zero norm")
    norms = _row_norms(model.class_hvs)
    finite = np.isfinite(norms)
    if np.any(finite & (norms == 0)):
        raise UntrainedClass("model contains an untrained (zero-norm) class hypervector")
    scores = model.class_hvs @ h.astype(model.class_hvs.dtype)
    with np.errstate(invalid="ignore"):
        scores = scores / (norms * h_norm)
    ranked = np.where(np.isnan(scores), -np.inf, scores)
    return int(np.argmax(ranked)), scores


def predict_batch(model, H):
    """Predicted labels for each row of an (N, dim) encoded matrix."""
    return np.array([predict(model, H[i])[0] for i in range(H.shape[0])], dtype=np.int64)


def _normalized_weights(w, n):
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (n,):
        raise DimensionMismatch(f"expected {n} sample weights, got shape {w.shape}")
    if np.any(w < 0):
        raise NegativeWeight("sample weights must be >= 0")
    total = w.sum()
    if total <= 0:
        raise AllZeroWeights("sample weights sum to zero")
    if np.all(w == w[0]):
        # exact path: uniform weights are the unweighted fit, bit for bit
        return np.full(n, 1.0 / n), np.ones(n)
    wn = w / total
    return wn, wn * n


def fit(model, H, y, w=None, cfg=None):
    """Train a weak learner on encoded samples.

    Args:
        model: an OnlineHDModel whose class_hvs provide shape/lr; not mutated.
        H: (N, dim) float32 encoded training matrix.
        y: (N,) integer labels in [0, n_classes).
        w: (N,) nonnegative sample weights, or None for uniform.
        cfg: TrainConfig; defaults apply when None.

    Returns:
        (trained_model, final_train_error) where the error is the weighted
        misclassification rate measured after the final epoch.
    """
    cfg = cfg or TrainConfig()
    H = np.asarray(H, dtype=np.float32)
    y = np.asarray(y, dtype=np.int64)
    n = H.shape[0]
    if H.ndim != 2 or H.shape[1] != model.dim:
        raise DimensionMismatch(f"expected (N, {model.dim}) matrix, got shape {H.shape}")
    if y.shape != (n,):
        raise DimensionMismatch("labels length must match rows of H")
    if np.any((y < 0) | (y >= model.n_classes)):
        raise ValueError(f"labels must lie in [0, {model.n_classes})")
    if w is None:
        w = np.ones(n)
    wn, factor = _normalized_weights(w, n)

    trained = model.copy()
    C = trained.class_hvs
    h_norms = np.array([np.linalg.norm(H[i]) for i in range(n)], dtype=np.float32)
    norms = _row_norms(C)
    lr = trained.lr

    # bundling initialization: weight each sample by (1 - similarity) to
    # the (evolving) class prototype and by its normalized sample weight
    for i in range(n):
        yi = y[i]
        if h_norms[i] == 0:
            continue
        if norms[yi] > 0:
            delta = float(C[yi] @ H[i]) / (float(norms[yi]) * float(h_norms[i]))
        else:
            delta = 0.0
        C[yi] += ((1.0 - delta) * wn[i]) * H[i]
        norms[yi] = np.linalg.norm(C[yi])

    rng = np.random.default_rng(cfg.shuffle_seed)
    for _epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for i in order:
            if h_norms[i] == 0:
                continue
            sims, ranked = _train_scores(C, norms, H[i], h_norms[i])
            pred = int(np.argmax(ranked))
            yi = int(y[i])
            if pred == yi:
                continue
            scale = lr * factor[i]
            C[yi] += (scale * (1.0 - float(sims[yi]))) * H[i]
            C[pred] -= (scale * (1.0 - float(sims[pred]))) * H[i]
            norms[yi] = np.linalg.norm(C[yi])
            norms[pred] = np.linalg.norm(C[pred])

    err = 0.0
    for i in range(n):
        if h_norms[i] == 0:
            err += wn[i]
            continue
        _, ranked = _train_scores(C, norms, H[i], h_norms[i])
        if int(np.argmax(ranked)) != int(y[i]):
            err += wn[i]
    return trained, float(err)
