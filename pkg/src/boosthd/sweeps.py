"""Experiment sweeps: robustness, stability, heatmap and imbalance.

Every sweep returns a SweepResult holding long-format rows (one metric
value per row, full parameter provenance on each) plus helpers to write
a deterministic CSV, a JSON summary of per-cell aggregates, and pivoted
plot-ready CSVs.  Rerunning a sweep with the same seeds yields
byte-identical files.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import onlinehd
from .boost import BoostConfig, fit_boost, fit_online, predict_boost_encoded
from .data import accuracy, macro_accuracy, make_imbalanced
from .encoder import encode_batch
from .errors import EmptyDataset
from .onlinehd import TrainConfig
from .perturb import PerturbConfig, bitflip_model, mad


@dataclass
class SweepResult:
    """Append-only long-format result rows."""

    sweep: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **kwargs):
        self.rows.append({k: kwargs.get(k) for k in self.columns})

    def values(self, **filters):
        """Metric values of rows matching all given column filters."""
        out = []
        for row in self.rows:
            if all(row.get(k) == v for k, v in filters.items()):
                out.append(row["value"])
        return out

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_cell(row[c]) for c in self.columns) + "\n")

    def write_summary(self, path, summary):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"schema_version": 1, "sweep": self.sweep, "summary": summary},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _eval_model(kind, model, H, y, metric):
    if kind == "boosthd":
        pred = predict_boost_encoded(model, H)
    else:
        pred = onlinehd.predict_batch(model, H)
    return (macro_accuracy if metric == "macro_accuracy" else accuracy)(y, pred)


def _train_pair(train, d_total, n_learners, seed, base_train):
    cfg = TrainConfig(epochs=base_train.epochs, lr=base_train.lr, shuffle_seed=seed)
    boost = fit_boost(train.X, train.y, BoostConfig(
        n_learners=n_learners, d_total=d_total, base_train=cfg, seed=seed))
    online, _ = fit_online(train.X, train.y, d_total, seed, cfg)
    return boost, online


def robustness_sweep(model, test, p_b_values, cfg, model_name="model"):
    """Accuracy under bit-flip noise across p_b values and trials.

    The model must carry an encoder (standalone OnlineHD) or be a
    BoostHD ensemble; the test set is encoded once up front.
    """
    if len(test) == 0:
        raise EmptyDataset("robustness sweep needs a nonempty test set")
    kind = "boosthd" if hasattr(model, "learners") else "onlinehd"
    H = encode_batch(model.encoder, test.X)
    result = SweepResult(
        sweep="robustness",
        columns=["sweep", "model", "p_b", "trial", "seed", "metric", "value"],
    )
    summary = {}
    for p_b in p_b_values:
        accs = []
        for trial in range(cfg.trials):
            perturbed = bitflip_model(
                model, PerturbConfig(p_b=p_b, trials=cfg.trials, seed=cfg.seed,
                                     include_encoder=cfg.include_encoder),
                trial,
            )
            if cfg.include_encoder:
                Ht = encode_batch(perturbed.encoder, test.X)
            else:
                Ht = H
            acc = _eval_model(kind, perturbed, Ht, test.y, "accuracy")
            accs.append(acc)
            result.add(sweep="robustness", model=model_name, p_b=p_b, trial=trial,
                       seed=cfg.seed, metric="accuracy", value=acc)
        summary[repr(float(p_b))] = {
            "mean": float(np.mean(accs)),
            "median": float(np.median(accs)),
            "mad": mad(accs),
        }
    return result, summary


def stability_sweep(train, test, d_values, n_learners, seeds, base_train=None):
    """Test accuracy of BoostHD vs OnlineHD across dimensions and seeds.

    Emits per-(model, D) mean and standard deviation, plus the aggregate
    mean sigma per model.
    """
    base_train = base_train or TrainConfig()
    result = SweepResult(
        sweep="stability",
        columns=["sweep", "model", "d_total", "n_learners", "seed", "metric", "value"],
    )
    for d in d_values:
        for seed in seeds:
            boost, online = _train_pair(train, d, n_learners, seed, base_train)
            Hb = encode_batch(boost.encoder, test.X)
            Ho = encode_batch(online.encoder, test.X)
            for name, model, H, nl in (("boosthd", boost, Hb, n_learners),
                                       ("onlinehd", online, Ho, 1)):
                kind = name
                acc = _eval_model(kind, model, H, test.y, "accuracy")
                result.add(sweep="stability", model=name, d_total=d, n_learners=nl,
                           seed=seed, metric="accuracy", value=acc)
    summary = {"per_d": {}, "mu_sigma": {}}
    sigmas = {"boosthd": [], "onlinehd": []}
    for name in ("boosthd", "onlinehd"):
        for d in d_values:
            vals = np.array(result.values(model=name, d_total=d))
            sigma = float(vals.std(ddof=0))
            sigmas[name].append(sigma)
            summary["per_d"].setdefault(name, {})[str(d)] = {
                "mean": float(vals.mean()), "sigma": sigma,
            }
        summary["mu_sigma"][name] = float(np.mean(sigmas[name]))
    return result, summary


def heatmap_sweep(train, test, n_learner_values, d_values, mode, seeds,
                  base_train=None):
    """Accuracy grid over learner counts and dimensions.

    mode "fixed": every learner gets the listed dimension (total grows
    with the learner count).  mode "divided": the listed dimension is
    the total, each learner gets d // n of it.
    """
    if mode not in ("fixed", "divided"):
        raise ValueError(f"mode must be 'fixed' or 'divided', got {mode!r}")
    base_train = base_train or TrainConfig()
    result = SweepResult(
        sweep="heatmap",
        columns=["sweep", "mode", "n_learners", "d", "d_total", "seed",
                 "metric", "value"],
    )
    for n in n_learner_values:
        for d in d_values:
            d_total = d * n if mode == "fixed" else d
            for seed in seeds:
                cfg = TrainConfig(epochs=base_train.epochs, lr=base_train.lr,
                                  shuffle_seed=seed)
                model = fit_boost(train.X, train.y, BoostConfig(
                    n_learners=n, d_total=d_total, base_train=cfg, seed=seed))
                H = encode_batch(model.encoder, test.X)
                acc = _eval_model("boosthd", model, H, test.y, "accuracy")
                result.add(sweep="heatmap", mode=mode, n_learners=n, d=d,
                           d_total=d_total, seed=seed, metric="accuracy", value=acc)
    summary = {}
    for n in n_learner_values:
        for d in d_values:
            vals = result.values(n_learners=n, d=d)
            summary[f"n={n},d={d}"] = {"mean": float(np.mean(vals)),
                                       "sigma": float(np.std(vals))}
    return result, summary


def overfit_sweep(train, test, target_class, r_values, d_total, n_learners,
                  seeds, base_train=None):
    """Macro accuracy on a balanced test set as training imbalance grows."""
    base_train = base_train or TrainConfig()
    result = SweepResult(
        sweep="overfit",
        columns=["sweep", "model", "r", "target_class", "d_total", "n_learners",
                 "seed", "metric", "value"],
    )
    for r in r_values:
        for seed in seeds:
            imb = make_imbalanced(train, target_class, r, seed)
            boost, online = _train_pair(imb, d_total, n_learners, seed, base_train)
            Hb = encode_batch(boost.encoder, test.X)
            Ho = encode_batch(online.encoder, test.X)
            for name, model, H, nl in (("boosthd", boost, Hb, n_learners),
                                       ("onlinehd", online, Ho, 1)):
                val = _eval_model(name, model, H, test.y, "macro_accuracy")
                result.add(sweep="overfit", model=name, r=r, target_class=target_class,
                           d_total=d_total, n_learners=nl, seed=seed,
                           metric="macro_accuracy", value=val)
    summary = {}
    for name in ("boosthd", "onlinehd"):
        summary[name] = {
            repr(float(r)): {"mean": float(np.mean(result.values(model=name, r=r)))}
            for r in r_values
        }
    return result, summary
