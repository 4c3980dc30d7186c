"""Dataset ingestion, windowed feature extraction, splits and imbalance.

CSV ingestion expects a header row; labels may be integers or strings and
are mapped to [0, L) in first-appearance order.  Windowed features follow
the wearable-sensor recipe: per channel min / max / mean / population std
over a sliding window, with the window labeled by majority vote.
"""

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    EmptyDataset,
    EmptyInput,
    EmptySplit,
    InvalidParams,
    InvalidRatio,
    IoFailure,
    LengthMismatch,
    MissingColumn,
    UnknownClass,
    UnknownSubject,
    UnparseableCell,
    WindowTooLarge,
)


@dataclass
class RawRecording:
    """Synchronized sensor channels with per-timestep labels."""

    channels: dict
    sample_labels: np.ndarray
    subject_id: str

    def __post_init__(self):
        lengths = {name: len(series) for name, series in self.channels.items()}
        if len(set(lengths.values())) > 1:
            raise LengthMismatch(f"channel lengths differ: {lengths}")
        n = next(iter(lengths.values())) if lengths else 0
        if len(self.sample_labels) != n:
            raise LengthMismatch("labels length must match channel length")


@dataclass
class Dataset:
    """Feature matrix with labels and subject ids."""

    X: np.ndarray
    y: np.ndarray
    subjects: np.ndarray
    feature_names: list
    label_mapping: dict = field(default_factory=dict)

    def __len__(self):
        return self.X.shape[0]

    @property
    def n_classes(self):
        return int(self.y.max()) + 1 if len(self.y) else 0


@dataclass
class NormStats:
    """Per-feature z-score statistics learned on a training split."""

    means: np.ndarray
    stds: np.ndarray
    kept: np.ndarray
    dropped_features: list


def load_csv(path, feature_columns, label_column, subject_column=None, delimiter=","):
    """Load a delimited text file into a Dataset.

    String labels map to [0, L) in first-appearance order; the mapping is
    recorded on the dataset.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh, delimiter=delimiter)
            header = reader.fieldnames or []
            needed = list(feature_columns) + [label_column]
            if subject_column:
                needed.append(subject_column)
            missing = [c for c in needed if c not in header]
            if missing:
                raise MissingColumn(f"{path} is missing columns: {missing}")
            rows = list(reader)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    X = np.empty((len(rows), len(feature_columns)), dtype=np.float64)
    labels = []
    subjects = []
    for i, row in enumerate(rows):
        for j, col in enumerate(feature_columns):
            try:
                X[i, j] = float(row[col])
            except (TypeError, ValueError) as exc:
                raise UnparseableCell(
                    f"row {i}, column {col!r}: cannot parse {row[col]!r} as a number"
                ) from exc
        labels.append(row[label_column])
        subjects.append(row[subject_column] if subject_column else "all")

    mapping = {}
    y = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        y[i] = mapping[lab]
    return Dataset(
        X=X,
        y=y,
        subjects=np.array(subjects),
        feature_names=list(feature_columns),
        label_mapping=mapping,
    )


def _majority_label(window_labels):
    values, counts = np.unique(window_labels, return_counts=True)
    top = counts.max()
    winners = values[counts == top]
    if winners.shape[0] == 1:
        return winners[0]
    return window_labels[-1]


def moving_window_features(rec, window=30, stride=1):
    """Per-window min / max / mean / std features for every channel.

    std is the population standard deviation (ddof = 0).  Window label is
    the majority label, ties resolved by the last timestep's label.
    """
    if window < 1 or stride < 1:
        raise InvalidParams("window and stride must be >= 1")
    names = list(rec.channels.keys())
    series = {k: np.asarray(rec.channels[k], dtype=np.float64) for k in names}
    n = len(rec.sample_labels)
    if any(len(s) < window for s in series.values()) or n < window:
        raise WindowTooLarge(f"window {window} exceeds a channel length")
    labels = np.asarray(rec.sample_labels)

    starts = range(0, n - window + 1, stride)
    feature_names = []
    for name in names:
        feature_names += [f"{name}_min", f"{name}_max", f"{name}_mean", f"{name}_std"]
    X = np.empty((len(starts), 4 * len(names)), dtype=np.float64)
    y_raw = []
    for r, start in enumerate(starts):
        col = 0
        for name in names:
            seg = series[name][start:start + window]
            X[r, col:col + 4] = (seg.min(), seg.max(), seg.mean(), seg.std(ddof=0))
            col += 4
        y_raw.append(_majority_label(labels[start:start + window]))

    if labels.dtype.kind in "iu":
        # integer labels pass through so multi-recording corpora keep one
        # shared vocabulary
        y = np.array([int(v) for v in y_raw], dtype=np.int64)
        mapping = {str(v): int(v) for v in sorted(set(y.tolist()))}
    else:
        mapping = {}
        y = np.empty(len(y_raw), dtype=np.int64)
        for i, lab in enumerate(y_raw):
            key = lab.item() if hasattr(lab, "item") else lab
            if key not in mapping:
                mapping[key] = len(mapping)
            y[i] = mapping[key]
    return Dataset(
        X=X,
        y=y,
        subjects=np.array([rec.subject_id] * len(y_raw)),
        feature_names=feature_names,
        label_mapping=mapping,
    )


def fit_normalizer(train):
    """Learn per-feature z-score statistics on the training split only.

    Constant features are dropped (recorded in the stats) instead of
    being given a fake unit variance.
    """
    if len(train) == 0:
        raise EmptyDataset("cannot fit a normalizer on an empty dataset")
    means = train.X.mean(axis=0)
    stds = train.X.std(axis=0, ddof=0)
    kept = stds > 0
    dropped = [name for name, keep in zip(train.feature_names, kept) if not keep]
    return NormStats(means=means[kept], stds=stds[kept], kept=kept, dropped_features=dropped)


def apply_normalizer(ds, stats):
    """Z-score a dataset with training statistics (never its own)."""
    if len(ds) == 0:
        raise EmptyDataset("cannot normalize an empty dataset")
    X = (ds.X[:, stats.kept] - stats.means) / stats.stds
    names = [n for n, keep in zip(ds.feature_names, stats.kept) if keep]
    return replace(ds, X=X, feature_names=names)


def standardize(train, *others, scale="auto"):
    """Z-score on training statistics, then shrink to encoder scale.

    The trigonometric encoder resolves distances of order one, so after
    z-scoring the features are multiplied by 1 / sqrt(F) ("auto"), which
    puts a typical feature vector at unit norm.  Pass a number to
    override, or None to skip scaling.

    Returns:
        ([train'] + [others'], stats)
    """
    stats = fit_normalizer(train)
    sets = [apply_normalizer(ds, stats) for ds in (train,) + others]
    if scale == "auto":
        scale = 1.0 / np.sqrt(sets[0].X.shape[1])
    if scale is not None:
        sets = [replace(ds, X=ds.X * scale) for ds in sets]
    return sets, stats


def split_by_subject(ds, test_subjects):
    """Partition by subject id; no subject ever appears in both splits."""
    test_subjects = set(test_subjects)
    if not test_subjects:
        raise UnknownSubject("test_subjects must be nonempty")
    present = set(ds.subjects.tolist())
    unknown = test_subjects - present
    if unknown:
        raise UnknownSubject(f"subjects not in dataset: {sorted(unknown)}")
    mask = np.array([s in test_subjects for s in ds.subjects])
    if mask.all():
        raise EmptySplit("every subject is a test subject; train split is empty")
    train = replace(ds, X=ds.X[~mask], y=ds.y[~mask], subjects=ds.subjects[~mask])
    test = replace(ds, X=ds.X[mask], y=ds.y[mask], subjects=ds.subjects[mask])
    return train, test


def make_imbalanced(ds, target_class, r, seed=0):
    """Replicate non-target rows by factor r >= 1 (fractional part seeded).

    Target-class rows pass through exactly once; increasing r increases
    the imbalance against the target class.  Output row order is a seeded
    shuffle of the replicated multiset.
    """
    if r < 1:
        raise InvalidRatio(f"replication factor must be >= 1, got {r}")
    if target_class not in set(ds.y.tolist()):
        raise UnknownClass(f"target class {target_class} not present")
    rng = np.random.default_rng(seed)
    whole = int(np.floor(r))
    frac = r - whole
    indices = []
    for i in range(len(ds)):
        if ds.y[i] == target_class:
            indices.append(i)
        else:
            reps = whole + (1 if frac > 0 and rng.random() < frac else 0)
            indices.extend([i] * reps)
    indices = np.array(indices, dtype=np.int64)
    rng.shuffle(indices)
    return replace(ds, X=ds.X[indices], y=ds.y[indices], subjects=ds.subjects[indices])


def synth_blobs(n_classes, n_per_class, n_features, separation, noise_std, seed,
                n_subjects=4):
    """Gaussian blob dataset with deterministic class directions.

    Class centers sit at separation * u_c where the unit directions u_c
    come from a fixed-seed Gaussian draw, so centers do not move when the
    sampling seed changes.  Subject ids cycle round-robin for split tests.
    """
    if n_classes < 2 or n_per_class < 1 or n_features < 1 or noise_std <= 0:
        raise InvalidParams("need n_classes >= 2, n_per_class >= 1, F >= 1, noise_std > 0")
    dir_rng = np.random.default_rng(1234567)
    dirs = dir_rng.standard_normal((n_classes, n_features))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)

    rng = np.random.default_rng(seed)
    n = n_classes * n_per_class
    X = np.empty((n, n_features))
    y = np.empty(n, dtype=np.int64)
    row = 0
    for c in range(n_classes):
        center = separation * dirs[c]
        X[row:row + n_per_class] = center + rng.normal(0.0, noise_std,
                                                       (n_per_class, n_features))
        y[row:row + n_per_class] = c
        row += n_per_class
    order = rng.permutation(n)
    X, y = X[order], y[order]
    subjects = np.array([f"s{i % n_subjects}" for i in range(n)])
    return Dataset(
        X=X,
        y=y,
        subjects=subjects,
        feature_names=[f"f{j}" for j in range(n_features)],
        label_mapping={str(c): c for c in range(n_classes)},
    )


def macro_accuracy(y_true, y_pred):
    """Unweighted mean of per-class recall over classes present in y_true."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInput("macro accuracy of empty inputs is undefined")
    recalls = []
    for c in np.unique(y_true):
        mask = y_true == c
        recalls.append(np.mean(y_pred[mask] == c))
    return float(np.mean(recalls))


def accuracy(y_true, y_pred):
    """Plain fraction of matching labels."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise EmptyInput("accuracy of empty inputs is undefined")
    return float(np.mean(y_true == y_pred))
