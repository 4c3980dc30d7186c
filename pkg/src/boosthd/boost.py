"""BoostHD ensemble: partitioned hyperspace + SAMME-weighted weak learners.

The total dimension D is split into contiguous slices of one shared
encoder, one slice per weak learner.  Learners train sequentially under
multiplicative sample weights; learner weights follow the multiclass
SAMME rule alpha = ln((1 - e) / e) + ln(L - 1).  Degenerate rounds
(perfect learner, or no better than chance) reset the sample weights to
uniform so later rounds stay informative.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import onlinehd
from .encoder import encode, encode_batch, init_encoder
from .errors import SingleClassData, TooManyLearners
from .onlinehd import OnlineHDModel, TrainConfig

DEFAULT_ALPHA_CAP = 10.0
DEFAULT_N_LEARNERS = 10


@dataclass(frozen=True)
class BoostConfig:
    """Ensemble training configuration."""

    n_learners: int = DEFAULT_N_LEARNERS
    d_total: int = 1000
    base_train: TrainConfig = field(default_factory=TrainConfig)
    alpha_cap: float = DEFAULT_ALPHA_CAP
    seed: int = 0

    def __post_init__(self):
        if self.n_learners < 1:
            raise ValueError("n_learners must be >= 1")
        if self.d_total < self.n_learners:
            raise TooManyLearners(
                f"d_total={self.d_total} cannot host {self.n_learners} learners"
            )
        if self.alpha_cap <= 0:
            raise ValueError("alpha_cap must be positive")


@dataclass
class BoostHDModel:
    """Trained ensemble.

    Attributes:
        learners: N_L weak learners in training order.
        alphas: float64 learner weights.
        partition: list of (offset, width) slices tiling [0, d_total).
        n_classes: number of labels L.
        d_total: total hyperspace dimension.
        encoder: the shared EncoderParams of out_dim d_total.
        diagnostics: per-round dicts with error, alpha and branch taken.
    """

    learners: list
    alphas: np.ndarray
    partition: list
    n_classes: int
    d_total: int
    encoder: object
    diagnostics: list = field(default_factory=list)

    @property
    def n_learners(self):
        return len(self.learners)


def partition_dimensions(d_total, n_learners):
    """Split [0, d_total) into n_learners contiguous slices.

    Widths differ by at most one; the remainder goes to the first slices.
    """
    if n_learners < 1:
        raise ValueError("n_learners must be >= 1")
    if d_total < n_learners:
        raise TooManyLearners(f"d_total={d_total} < n_learners={n_learners}")
    base, extra = divmod(d_total, n_learners)
    slices = []
    offset = 0
    for i in range(n_learners):
        width = base + (1 if i < extra else 0)
        slices.append((offset, width))
        offset += width
    return slices


def boost_rounds(y, n_classes, n_rounds, train_round, alpha_cap=DEFAULT_ALPHA_CAP):
    """Run the SAMME weight recurrence around an arbitrary weak trainer.

    Args:
        y: (N,) integer labels.
        n_classes: L >= 2.
        n_rounds: number of boosting rounds.
        train_round: callable (round_index, weights) -> (learner, yhat)
            where weights sum to 1 and yhat are training-set predictions.
        alpha_cap: clamp for alpha (also the value assigned at e == 0).

    Returns:
        (learners, alphas, diagnostics).  Each diagnostics entry records
        the weighted error, the alpha and which branch fired.
    """
    y = np.asarray(y, dtype=np.int64)
    n = y.shape[0]
    if n_classes < 2:
        raise SingleClassData("boosting requires at least 2 classes")
    w = np.full(n, 1.0 / n, dtype=np.float64)
    chance = 1.0 - 1.0 / n_classes
    learners, alphas, diagnostics = [], [], []
    for i in range(n_rounds):
        learner, yhat = train_round(i, w.copy())
        yhat = np.asarray(yhat, dtype=np.int64)
        mis = yhat != y
        e = float(w[mis].sum())
        if e == 0.0:
            alpha = float(alpha_cap)
            w = np.full(n, 1.0 / n)
            branch = "perfect"
        elif e >= chance:
            alpha = 0.0
            w = np.full(n, 1.0 / n)
            branch = "chance"
        else:
            alpha = math.log((1.0 - e) / e) + math.log(n_classes - 1)
            alpha = min(max(alpha, 0.0), float(alpha_cap))
            w = w * np.exp(alpha * mis)
            w = w / w.sum()
            branch = "normal"
        learners.append(learner)
        alphas.append(alpha)
        diagnostics.append({"round": i, "error": e, "alpha": alpha, "branch": branch})
    return learners, np.array(alphas, dtype=np.float64), diagnostics


def fit_boost(X, y, cfg):
    """Train a BoostHD ensemble on raw features.

    One shared encoder of out_dim cfg.d_total is derived from cfg.seed;
    learner i trains on the columns of its partition slice.
    """
    X = np.asarray(X, dtype=np.float32)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError(f"X must be a nonempty (N, F) matrix, got shape {X.shape}")
    n_classes = int(y.max()) + 1 if y.size else 0
    if n_classes < 2:
        raise SingleClassData("training data must contain at least 2 classes")
    params = init_encoder(X.shape[1], cfg.d_total, cfg.seed)
    H = encode_batch(params, X)
    partition = partition_dimensions(cfg.d_total, cfg.n_learners)

    def train_round(i, w):
        offset, width = partition[i]
        Hi = H[:, offset:offset + width]
        empty = OnlineHDModel.empty(n_classes, width, lr=cfg.base_train.lr)
        trained, _err = onlinehd.fit(empty, Hi, y, w, cfg.base_train)
        yhat = onlinehd.predict_batch(trained, Hi)
        return trained, yhat

    learners, alphas, diagnostics = boost_rounds(
        y, n_classes, cfg.n_learners, train_round, alpha_cap=cfg.alpha_cap
    )
    return BoostHDModel(
        learners=learners,
        alphas=alphas,
        partition=partition,
        n_classes=n_classes,
        d_total=cfg.d_total,
        encoder=params,
        diagnostics=diagnostics,
    )


def fit_online(X, y, d_total, seed, train_cfg=None):
    """Train a standalone OnlineHD model on the full d_total hyperspace.

    Uses the exact same encoder/training path as a one-learner ensemble,
    so fit_boost(n_learners=1) and fit_online agree bit for bit.
    """
    train_cfg = train_cfg or TrainConfig()
    X = np.asarray(X, dtype=np.float32)
    y = np.asarray(y, dtype=np.int64)
    n_classes = int(y.max()) + 1
    params = init_encoder(X.shape[1], d_total, seed)
    H = encode_batch(params, X)
    empty = OnlineHDModel.empty(n_classes, d_total, lr=train_cfg.lr, encoder=params)
    trained, err = onlinehd.fit(empty, H, y, None, train_cfg)
    return trained, err


def vote_scores(model, learner_labels):
    """Aggregate per-learner labels into weighted vote scores."""
    scores = np.zeros(model.n_classes, dtype=np.float64)
    for alpha, label in zip(model.alphas, learner_labels):
        scores[label] += alpha
    return scores


def predict_boost(model, x):
    """Predict one raw feature vector with the ensemble.

    Returns:
        (label, vote_scores) where vote_scores[c] sums the alphas of
        learners voting for class c.  Ties break toward the lowest index.
    """
    h = encode(model.encoder, x)
    labels = []
    for (offset, width), learner in zip(model.partition, model.learners):
        label, _ = onlinehd.predict(learner, h[offset:offset + width])
        labels.append(label)
    scores = vote_scores(model, labels)
    return int(np.argmax(scores)), scores


def predict_boost_batch(model, X):
    """Predicted ensemble labels for each row of an (N, F) feature matrix."""
    X = np.asarray(X, dtype=np.float32)
    return np.array([predict_boost(model, X[i])[0] for i in range(X.shape[0])],
                    dtype=np.int64)


def predict_boost_encoded(model, H):
    """Predicted ensemble labels for pre-encoded rows (N, d_total).

    Avoids re-encoding in sweeps where the encoder is untouched.
    """
    H = np.asarray(H, dtype=np.float32)
    out = np.empty(H.shape[0], dtype=np.int64)
    for i in range(H.shape[0]):
        labels = [
            onlinehd.predict(learner, H[i, off:off + width])[0]
            for (off, width), learner in zip(model.partition, model.learners)
        ]
        out[i] = int(np.argmax(vote_scores(model, labels)))
    return out
