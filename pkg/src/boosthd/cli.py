"""Benchmark command-line front end.

Subcommands: train, eval, sweep (heatmap|stability|robustness|overfit),
analyze (span|spectral), data (prep|synth).  Each run persists its merged
effective config next to its outputs; identical config + seed produces
byte-identical result files (wall-clock timings go to a run.log sidecar).

Exit code families: 1 config, 2 IO, 3 data validation, 4 numeric.
"""

import hashlib
import json
import os
import sys
import tempfile
import time

import click
import numpy as np

from . import model_io, onlinehd, spectral, sweeps
from .boost import BoostConfig, BoostHDModel, fit_boost, fit_online, predict_boost_batch
from .data import Dataset, RawRecording, load_csv, moving_window_features, synth_blobs
from .data import accuracy as plain_accuracy
from .data import macro_accuracy
from .errors import (
    EXIT_CONFIG,
    EXIT_IO,
    BoostHDError,
    ConfigError,
    LogSingularity,
    SchemaMismatch,
)
from .onlinehd import TrainConfig
from .perturb import PerturbConfig

CONFIG_FORMAT_VERSION = 1


# --- persistence helpers ---

def _atomic_write(path, data):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, obj):
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _log_line(out_dir, message):
    with open(os.path.join(out_dir, "run.log"), "a", encoding="utf-8") as fh:
        fh.write(f"{time.strftime('%Y-%m-%dT%H:%M:%S')} {message}\n")


def _config_hash(config):
    payload = json.dumps(config, sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:12]


def _resolve_out(out, name, config):
    if not out:
        root = os.environ.get("BOOSTHD_OUT", "runs")
        out = os.path.join(root, f"{name}-{_config_hash(config)}")
    os.makedirs(out, exist_ok=True)
    return out


def _effective_config(ctx, config_path, params):
    """Merge defaults, config file and explicit CLI flags (flags win)."""
    merged = dict(params)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise BoostHDError(f"cannot read config {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a flat JSON object")
        file_cfg.pop("format_version", None)
        unknown = set(file_cfg) - set(params)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in file_cfg.items():
            source = ctx.get_parameter_source(key)
            if source is None or source.name in ("DEFAULT", "DEFAULT_MAP"):
                merged[key] = value
    merged["format_version"] = CONFIG_FORMAT_VERSION
    return merged


def _parse_list(text, cast):
    if not text:
        return []
    return [cast(part.strip()) for part in text.split(",") if part.strip()]


# --- dataset helpers ---

def _load_dataset(path, label_col, subject_col, features):
    feature_cols = _parse_list(features, str)
    if not feature_cols:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
        feature_cols = [c for c in header if c not in (label_col, subject_col)]
    return load_csv(path, feature_cols, label_col,
                    subject_column=subject_col or None)


def _dataset_for_sweep(cfg):
    if cfg["data"]:
        ds = _load_dataset(cfg["data"], cfg["label_col"], cfg["subject_col"],
                           cfg["features"])
    else:
        ds = synth_blobs(cfg["synth_classes"], cfg["synth_per_class"],
                         cfg["synth_features"], cfg["synth_sep"],
                         cfg["synth_noise"], cfg["synth_seed"])
    test_subjects = _parse_list(cfg["test_subjects"], str)
    if not test_subjects:
        seen = list(dict.fromkeys(ds.subjects.tolist()))
        test_subjects = [seen[-1]]
    from .data import split_by_subject, standardize

    train_ds, test_ds = split_by_subject(ds, test_subjects)
    scale = cfg.get("feature_scale", "auto")
    if scale != "auto":
        scale = float(scale) if scale not in (None, "none") else None
    (train_ds, test_ds), _stats = standardize(train_ds, test_ds, scale=scale)
    return train_ds, test_ds


def _write_dataset_csv(path, ds):
    lines = [",".join(ds.feature_names + ["label", "subject"])]
    for i in range(len(ds)):
        cells = [repr(float(v)) for v in ds.X[i]]
        cells += [str(int(ds.y[i])), str(ds.subjects[i])]
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def _confusion(y_true, y_pred, n_classes):
    mat = np.zeros((n_classes, n_classes), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        mat[int(t), int(p)] += 1
    return mat


def _classification_metrics(y_true, y_pred, n_classes):
    conf = _confusion(y_true, y_pred, n_classes)
    recalls = {}
    for c in range(n_classes):
        total = conf[c].sum()
        recalls[str(c)] = float(conf[c, c] / total) if total else None
    return {
        "accuracy": plain_accuracy(y_true, y_pred),
        "macro_accuracy": macro_accuracy(y_true, y_pred),
        "confusion_matrix": conf.tolist(),
        "per_class_recall": recalls,
    }


def _predict_dataset(model, ds):
    if isinstance(model, BoostHDModel):
        return predict_boost_batch(model, ds.X)
    from .encoder import encode_batch

    H = encode_batch(model.encoder, ds.X)
    return onlinehd.predict_batch(model, H)


# --- CLI skeleton ---

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--threads", type=int, envvar="BOOSTHD_THREADS", default=1,
              show_default=True, help="Upper bound on worker threads.")
@click.pass_context
def cli(ctx, threads):
    """BoostHD benchmark harness."""
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


_common_data_opts = [
    click.option("--data", default="", help="Dataset CSV; synthetic blobs when omitted."),
    click.option("--label-col", default="label", show_default=True),
    click.option("--subject-col", default="subject", show_default=True),
    click.option("--features", default="",
                 help="Comma-separated feature columns (default: all others)."),
]

_synth_opts = [
    click.option("--synth-classes", type=int, default=3, show_default=True),
    click.option("--synth-per-class", type=int, default=120, show_default=True),
    click.option("--synth-features", type=int, default=16, show_default=True),
    click.option("--synth-sep", type=float, default=4.0, show_default=True),
    click.option("--synth-noise", type=float, default=1.0, show_default=True),
    click.option("--synth-seed", type=int, default=0, show_default=True),
]


def _add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


# --- train / eval ---

@cli.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@_add_options(_common_data_opts)
@click.option("--d-total", type=int, default=1000, show_default=True)
@click.option("--n-learners", type=int, default=10, show_default=True)
@click.option("--lr", type=float, default=0.035, show_default=True)
@click.option("--epochs", type=int, default=20, show_default=True)
@click.option("--alpha-cap", type=float, default=10.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--single", is_flag=True,
              help="Train a standalone OnlineHD model (requires --n-learners 1).")
@click.option("--out", default="", help="Output directory.")
@click.pass_context
def train(ctx, config_path, **params):
    """Train a model and write the versioned model file plus metrics."""
    cfg = _effective_config(ctx, config_path, params)
    if cfg["single"] and cfg["n_learners"] != 1:
        raise ConfigError("--single requires --n-learners 1")
    ds = _load_dataset(cfg["data"], cfg["label_col"], cfg["subject_col"],
                       cfg["features"]) if cfg["data"] else None
    if ds is None:
        raise ConfigError("train requires --data")
    out = _resolve_out(cfg["out"], "train", cfg)
    train_cfg = TrainConfig(epochs=cfg["epochs"], lr=cfg["lr"],
                            shuffle_seed=cfg["seed"])
    started = time.perf_counter()
    if cfg["single"]:
        model, _ = fit_online(ds.X, ds.y, cfg["d_total"], cfg["seed"], train_cfg)
        rounds = []
    else:
        model = fit_boost(ds.X, ds.y, BoostConfig(
            n_learners=cfg["n_learners"], d_total=cfg["d_total"],
            base_train=train_cfg, alpha_cap=cfg["alpha_cap"], seed=cfg["seed"]))
        rounds = model.diagnostics
    elapsed = time.perf_counter() - started

    y_pred = _predict_dataset(model, ds)
    metrics = _classification_metrics(ds.y, y_pred, model.n_classes)
    metrics["rounds"] = rounds
    metrics["label_mapping"] = ds.label_mapping
    model_path = os.path.join(out, "model.bhd")
    model_io.save_model(model, model_path)
    _write_json(os.path.join(out, "metrics.json"), metrics)
    _write_json(os.path.join(out, "config.json"), cfg)
    _log_line(out, f"train completed in {elapsed:.3f}s")
    click.echo(f"model written to {model_path} (train accuracy "
               f"{metrics['accuracy']:.4f})")


@cli.command("eval")
@click.option("--config", "config_path", default="", help="JSON config file.")
@click.option("--model", "model_path", required=True)
@_add_options(_common_data_opts)
@click.option("--filter", "subject_filter", default="",
              help="Comma-separated subject ids to evaluate on.")
@click.option("--out", default="", help="Output directory.")
@click.pass_context
def eval_cmd(ctx, config_path, **params):
    """Evaluate a saved model on a dataset."""
    cfg = _effective_config(ctx, config_path, params)
    if not cfg["data"]:
        raise ConfigError("eval requires --data")
    model = model_io.load_model(cfg["model_path"])
    ds = _load_dataset(cfg["data"], cfg["label_col"], cfg["subject_col"],
                       cfg["features"])
    if ds.X.shape[1] != model.encoder.in_features:
        raise SchemaMismatch(
            f"dataset has {ds.X.shape[1]} features, model expects "
            f"{model.encoder.in_features}")
    if len(ds) and int(ds.y.max()) >= model.n_classes:
        raise SchemaMismatch("dataset labels exceed the model's class count")
    wanted = _parse_list(cfg["subject_filter"], str)
    if wanted:
        mask = np.isin(ds.subjects, wanted)
        from dataclasses import replace as _replace

        ds = _replace(ds, X=ds.X[mask], y=ds.y[mask], subjects=ds.subjects[mask])
        if len(ds) == 0:
            raise SchemaMismatch(f"no rows match subject filter {wanted}")
    out = _resolve_out(cfg["out"], "eval", cfg)
    started = time.perf_counter()
    y_pred = _predict_dataset(model, ds)
    elapsed = time.perf_counter() - started
    metrics = _classification_metrics(ds.y, y_pred, model.n_classes)
    per_subject = {}
    for subject in sorted(set(ds.subjects.tolist())):
        mask = ds.subjects == subject
        per_subject[subject] = plain_accuracy(ds.y[mask], y_pred[mask])
    metrics["per_subject_accuracy"] = per_subject
    _write_json(os.path.join(out, "metrics.json"), metrics)
    _write_json(os.path.join(out, "config.json"), cfg)
    _log_line(out, f"eval of {len(ds)} rows in {elapsed:.3f}s "
                   f"({elapsed / max(len(ds), 1) * 1e6:.1f} us/query)")
    click.echo(f"accuracy {metrics['accuracy']:.4f}, macro "
               f"{metrics['macro_accuracy']:.4f} -> {out}")


# --- data subcommands ---

@cli.group()
def data():
    """Dataset generation and preprocessing."""


@data.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@click.option("--classes", type=int, default=3, show_default=True)
@click.option("--per-class", type=int, default=120, show_default=True)
@click.option("--features", type=int, default=16, show_default=True)
@click.option("--separation", type=float, default=4.0, show_default=True)
@click.option("--noise-std", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--subjects", type=int, default=4, show_default=True)
@click.option("--out", default="", help="Output directory.")
@click.pass_context
def synth(ctx, config_path, **params):
    """Generate a synthetic blob dataset CSV with a manifest."""
    cfg = _effective_config(ctx, config_path, params)
    ds = synth_blobs(cfg["classes"], cfg["per_class"], cfg["features"],
                     cfg["separation"], cfg["noise_std"], cfg["seed"],
                     n_subjects=cfg["subjects"])
    out = _resolve_out(cfg["out"], "synth", cfg)
    _write_dataset_csv(os.path.join(out, "dataset.csv"), ds)
    _write_json(os.path.join(out, "manifest.json"), {
        "schema_version": 1,
        "generator": "synth_blobs",
        "config": cfg,
        "label_mapping": ds.label_mapping,
        "n_rows": len(ds),
        "feature_names": ds.feature_names,
    })
    click.echo(f"wrote {len(ds)} rows to {out}/dataset.csv")


@data.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@click.option("--input", "input_path", required=True,
              help="Timestep CSV: channel columns plus label and subject.")
@click.option("--label-col", default="label", show_default=True)
@click.option("--subject-col", default="subject", show_default=True)
@click.option("--channels", default="",
              help="Comma-separated channel columns (default: all others).")
@click.option("--window", type=int, default=30, show_default=True)
@click.option("--stride", type=int, default=1, show_default=True)
@click.option("--out", default="", help="Output directory.")
@click.pass_context
def prep(ctx, config_path, **params):
    """Extract windowed statistical features from raw recordings."""
    cfg = _effective_config(ctx, config_path, params)
    raw = _load_dataset(cfg["input_path"], cfg["label_col"], cfg["subject_col"],
                        cfg["channels"])
    channel_names = raw.feature_names
    pieces = []
    for subject in dict.fromkeys(raw.subjects.tolist()):
        mask = raw.subjects == subject
        rec = RawRecording(
            channels={name: raw.X[mask, j] for j, name in enumerate(channel_names)},
            sample_labels=raw.y[mask],
            subject_id=subject,
        )
        pieces.append(moving_window_features(rec, cfg["window"], cfg["stride"]))
    X = np.vstack([p.X for p in pieces])
    y = np.concatenate([p.y for p in pieces])
    subjects = np.concatenate([p.subjects for p in pieces])
    ds = Dataset(X=X, y=y, subjects=subjects,
                 feature_names=pieces[0].feature_names,
                 label_mapping=raw.label_mapping)
    out = _resolve_out(cfg["out"], "prep", cfg)
    _write_dataset_csv(os.path.join(out, "dataset.csv"), ds)
    _write_json(os.path.join(out, "manifest.json"), {
        "schema_version": 1,
        "generator": "moving_window_features",
        "config": cfg,
        "label_mapping": ds.label_mapping,
        "n_rows": len(ds),
        "feature_names": ds.feature_names,
    })
    click.echo(f"wrote {len(ds)} windows to {out}/dataset.csv")


# --- sweep subcommands ---

@cli.group()
def sweep():
    """Parameter sweeps backing the benchmark figures."""


def _finish_sweep(result, summary, cfg, out, pivot_lines, plot_fn, plots):
    result.write_csv(os.path.join(out, "results.csv"))
    result.write_summary(os.path.join(out, "summary.json"), summary)
    _atomic_write(os.path.join(out, "pivot.csv"), "\n".join(pivot_lines) + "\n")
    _write_json(os.path.join(out, "config.json"), cfg)
    if plots and plot_fn is not None:
        plot_fn()
    click.echo(f"sweep results in {out}")


_sweep_shared = _common_data_opts + _synth_opts + [
    click.option("--test-subjects", default="",
                 help="Comma-separated held-out subjects (default: last)."),
    click.option("--feature-scale", default="auto", show_default=True,
                 help="Post-z-score scale factor; 'auto' = 1/sqrt(F), 'none' to skip."),
    click.option("--epochs", type=int, default=20, show_default=True),
    click.option("--lr", type=float, default=0.035, show_default=True),
    click.option("--out", default="", help="Output directory."),
    click.option("--plots/--no-plots", default=True, show_default=True),
]


@sweep.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@_add_options(_sweep_shared)
@click.option("--n-learners-list", default="1,10,100", show_default=True)
@click.option("--d-list", default="100,1000", show_default=True)
@click.option("--mode", type=click.Choice(["fixed", "divided"]), default="divided",
              show_default=True)
@click.option("--seeds", default="0,1,2", show_default=True)
@click.pass_context
def heatmap(ctx, config_path, **params):
    """Accuracy grid over learner counts and dimensions."""
    cfg = _effective_config(ctx, config_path, params)
    train_ds, test_ds = _dataset_for_sweep(cfg)
    n_values = _parse_list(cfg["n_learners_list"], int)
    d_values = _parse_list(cfg["d_list"], int)
    seeds = _parse_list(cfg["seeds"], int)
    base = TrainConfig(epochs=cfg["epochs"], lr=cfg["lr"])
    result, summary = sweeps.heatmap_sweep(
        train_ds, test_ds, n_values, d_values, cfg["mode"], seeds, base)
    out = _resolve_out(cfg["out"], "heatmap", cfg)
    pivot = ["n_learners," + ",".join(str(d) for d in d_values)]
    for n in n_values:
        cells = [repr(float(np.mean(result.values(n_learners=n, d=d))))
                 for d in d_values]
        pivot.append(f"{n}," + ",".join(cells))

    def render():
        from .plotting import plot_heatmap

        plot_heatmap(result, n_values, d_values, cfg["mode"],
                     os.path.join(out, "heatmap.png"))

    _finish_sweep(result, summary, cfg, out, pivot, render, cfg["plots"])


@sweep.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@_add_options(_sweep_shared)
@click.option("--d-list", default="500,1000,2000,4000", show_default=True)
@click.option("--n-learners", type=int, default=10, show_default=True)
@click.option("--seeds", default="0,1,2,3,4,5,6,7,8,9", show_default=True)
@click.pass_context
def stability(ctx, config_path, **params):
    """Accuracy spread of BoostHD vs OnlineHD across dimensions."""
    cfg = _effective_config(ctx, config_path, params)
    train_ds, test_ds = _dataset_for_sweep(cfg)
    d_values = _parse_list(cfg["d_list"], int)
    seeds = _parse_list(cfg["seeds"], int)
    base = TrainConfig(epochs=cfg["epochs"], lr=cfg["lr"])
    result, summary = sweeps.stability_sweep(
        train_ds, test_ds, d_values, cfg["n_learners"], seeds, base)
    out = _resolve_out(cfg["out"], "stability", cfg)
    pivot = ["d,boosthd_mean,boosthd_sigma,onlinehd_mean,onlinehd_sigma"]
    for d in d_values:
        row = [str(d)]
        for name in ("boosthd", "onlinehd"):
            cell = summary["per_d"][name][str(d)]
            row += [repr(cell["mean"]), repr(cell["sigma"])]
        pivot.append(",".join(row))

    def render():
        from .plotting import plot_stability

        plot_stability(summary, d_values, os.path.join(out, "stability.png"))

    _finish_sweep(result, summary, cfg, out, pivot, render, cfg["plots"])


@sweep.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@_add_options(_sweep_shared)
@click.option("--d-total", type=int, default=1000, show_default=True)
@click.option("--n-learners", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--p-b-list", default="0,1e-6,1e-5,1e-4", show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--noise-seed", type=int, default=0, show_default=True)
@click.pass_context
def robustness(ctx, config_path, **params):
    """Bit-flip robustness of BoostHD and OnlineHD at matched dimension."""
    cfg = _effective_config(ctx, config_path, params)
    train_ds, test_ds = _dataset_for_sweep(cfg)
    p_b_values = _parse_list(cfg["p_b_list"], float)
    base = TrainConfig(epochs=cfg["epochs"], lr=cfg["lr"], shuffle_seed=cfg["seed"])
    boost = fit_boost(train_ds.X, train_ds.y, BoostConfig(
        n_learners=cfg["n_learners"], d_total=cfg["d_total"], base_train=base,
        seed=cfg["seed"]))
    online, _ = fit_online(train_ds.X, train_ds.y, cfg["d_total"], cfg["seed"], base)
    pcfg = PerturbConfig(p_b=0.0, trials=cfg["trials"], seed=cfg["noise_seed"])
    combined = sweeps.SweepResult(
        sweep="robustness",
        columns=["sweep", "model", "p_b", "trial", "seed", "metric", "value"])
    summaries = {}
    for name, model in (("boosthd", boost), ("onlinehd", online)):
        res, summary = sweeps.robustness_sweep(model, test_ds, p_b_values, pcfg,
                                               model_name=name)
        combined.rows.extend(res.rows)
        summaries[name] = summary
    out = _resolve_out(cfg["out"], "robustness", cfg)
    pivot = ["p_b,boosthd_mean,boosthd_mad,onlinehd_mean,onlinehd_mad"]
    for p_b in p_b_values:
        key = repr(float(p_b))
        row = [key]
        for name in ("boosthd", "onlinehd"):
            row += [repr(summaries[name][key]["mean"]),
                    repr(summaries[name][key]["mad"])]
        pivot.append(",".join(row))

    def render():
        from .plotting import plot_robustness

        plot_robustness(summaries, p_b_values, os.path.join(out, "robustness.png"))

    _finish_sweep(combined, summaries, cfg, out, pivot, render, cfg["plots"])


@sweep.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@_add_options(_sweep_shared)
@click.option("--target-class", type=int, default=0, show_default=True)
@click.option("--r-list", default="1,2,4,8", show_default=True)
@click.option("--d-total", type=int, default=1000, show_default=True)
@click.option("--n-learners", type=int, default=10, show_default=True)
@click.option("--seeds", default="0,1,2,3,4,5,6,7,8,9", show_default=True)
@click.pass_context
def overfit(ctx, config_path, **params):
    """Macro accuracy under growing training imbalance."""
    cfg = _effective_config(ctx, config_path, params)
    train_ds, test_ds = _dataset_for_sweep(cfg)
    r_values = _parse_list(cfg["r_list"], float)
    seeds = _parse_list(cfg["seeds"], int)
    base = TrainConfig(epochs=cfg["epochs"], lr=cfg["lr"])
    result, summary = sweeps.overfit_sweep(
        train_ds, test_ds, cfg["target_class"], r_values, cfg["d_total"],
        cfg["n_learners"], seeds, base)
    out = _resolve_out(cfg["out"], "overfit", cfg)
    pivot = ["r,boosthd_macro,onlinehd_macro"]
    for r in r_values:
        key = repr(float(r))
        pivot.append(",".join([key, repr(summary["boosthd"][key]["mean"]),
                               repr(summary["onlinehd"][key]["mean"])]))

    def render():
        from .plotting import plot_overfit

        plot_overfit(summary, r_values, os.path.join(out, "overfit.png"))

    _finish_sweep(result, summary, cfg, out, pivot, render, cfg["plots"])


# --- analyze subcommands ---

@cli.group()
def analyze():
    """Spectral and span-utilization analyses."""


@analyze.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@click.option("--q", type=float, default=0.25, show_default=True)
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--q-grid", default="10,100,1000", show_default=True,
              help="q values for the limit-term table.")
@click.option("--empirical", default="",
              help="Monte Carlo check as 'n_r,n_c,n_seeds'.")
@click.option("--out", default="", help="Output directory.")
@click.option("--plots/--no-plots", default=True, show_default=True)
@click.pass_context
def spectral_cmd(ctx, config_path, **params):
    """Marchenko-Pastur bounds, moment approximations and limit terms."""
    cfg = _effective_config(ctx, config_path, params)
    p = spectral.MPParams(q=cfg["q"], sigma=cfg["sigma"])
    lo, hi = spectral.mp_bounds(p)
    mean_n, var_n = spectral.mp_moments_numeric(p, cfg["tol"])
    report = {
        "q": cfg["q"],
        "sigma": cfg["sigma"],
        "lambda_min": lo,
        "lambda_max": hi,
        "mean_approx": spectral.mp_mean_approx(p),
        "numeric_mean": mean_n,
        "numeric_variance": var_n,
    }
    try:
        report["variance_approx"] = spectral.mp_variance_approx(p)
        report["variance_approx_singular"] = False
    except LogSingularity:
        report["variance_approx"] = None
        report["variance_approx_singular"] = True
    terms = {}
    for qv in _parse_list(cfg["q_grid"], float):
        t1, t2, t3 = spectral.limit_terms(qv)
        terms[repr(float(qv))] = {"t1": t1, "t2": t2, "t3": t3}
    report["limit_terms"] = terms
    empirical_evals = None
    if cfg["empirical"]:
        n_r, n_c, n_seeds = _parse_list(cfg["empirical"], int)
        stats = []
        rng_evals = []
        for seed in range(n_seeds):
            rng = np.random.default_rng(seed)
            K = cfg["sigma"] * rng.standard_normal((n_r, n_c))
            st = spectral.empirical_spectrum(K)
            stats.append({"seed": seed, "mean": st.mean, "variance": st.variance,
                          "axis_ratio": st.axis_ratio})
            svals = np.linalg.svd(K, compute_uv=False)
            rng_evals.append(svals ** 2 / n_r)
        report["empirical_stats"] = stats
        report["empirical_mean"] = float(np.mean([s["mean"] for s in stats]))
        empirical_evals = np.concatenate(rng_evals)
    out = _resolve_out(cfg["out"], "spectral", cfg)
    _write_json(os.path.join(out, "spectral.json"), report)
    _write_json(os.path.join(out, "config.json"), cfg)
    if cfg["plots"]:
        from .plotting import plot_spectral

        plot_report = dict(report)
        plot_report["empirical"] = empirical_evals
        plot_spectral(plot_report, os.path.join(out, "spectral.png"))
    click.echo(f"spectral report in {out}")


@analyze.command()
@click.option("--config", "config_path", default="", help="JSON config file.")
@click.option("--model", "model_paths", multiple=True, required=True,
              help="Model file; pass twice to compare two models.")
@click.option("--rank-tol", type=float, default=1e-10, show_default=True)
@click.option("--out", default="", help="Output directory.")
@click.option("--plots/--no-plots", default=True, show_default=True)
@click.pass_context
def span(ctx, config_path, **params):
    """Span utilization of a model's class hypervectors."""
    cfg = _effective_config(ctx, config_path, params)
    cfg["model_paths"] = list(cfg["model_paths"])
    reports = {}
    for path in cfg["model_paths"]:
        model = model_io.load_model(path)
        if isinstance(model, BoostHDModel):
            C = np.hstack([m.class_hvs for m in model.learners])
            name = f"boosthd:{os.path.basename(path)}"
        else:
            C = model.class_hvs
            name = f"onlinehd:{os.path.basename(path)}"
        rep = spectral.span_utilization(C, cfg["rank_tol"])
        reports[name] = {
            "numeric_rank": rep.numeric_rank,
            "rank_fraction": rep.rank_fraction,
            "attenuation": rep.attenuation,
            "sp": rep.sp,
            "degenerate": rep.degenerate,
            "pairwise_sims": rep.pairwise_sims.tolist(),
        }
    payload = {"schema_version": 1, "reports": reports}
    if len(reports) == 2:
        (name_a, rep_a), (name_b, rep_b) = reports.items()
        payload["comparison"] = {
            "first": name_a,
            "second": name_b,
            "sp_ratio": rep_a["sp"] / rep_b["sp"] if rep_b["sp"] else None,
        }
    out = _resolve_out(cfg["out"], "span", cfg)
    _write_json(os.path.join(out, "span.json"), payload)
    _write_json(os.path.join(out, "config.json"), cfg)
    if cfg["plots"]:
        from .plotting import plot_span

        plot_span(reports, os.path.join(out, "span.png"))
    click.echo(f"span report in {out}")


def main(argv=None):
    """Entry point mapping error families to exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return 130
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except BoostHDError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        return EXIT_IO
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
