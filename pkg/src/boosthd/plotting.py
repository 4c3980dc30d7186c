"""Figure rendering for sweep and analysis outputs.

Renders matplotlib figures to files next to the CSV/JSON results.  The
delimited output stays the canonical artifact; figures are a convenience
view and can be switched off with --no-plots.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MODEL_COLORS = {"boosthd": "tab:orange", "onlinehd": "tab:blue"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_heatmap(result, n_values, d_values, mode, path):
    """Mean-accuracy grid over learner counts and dimensions."""
    grid = np.empty((len(n_values), len(d_values)))
    for i, n in enumerate(n_values):
        for j, d in enumerate(d_values):
            grid[i, j] = np.mean(result.values(n_learners=n, d=d))
    fig, ax = plt.subplots(figsize=(6, 4))
    im = ax.imshow(grid, aspect="auto", origin="lower", cmap="viridis")
    ax.set_xticks(range(len(d_values)), [str(d) for d in d_values])
    ax.set_yticks(range(len(n_values)), [str(n) for n in n_values])
    ax.set_xlabel("dimension per learner" if mode == "fixed" else "total dimension")
    ax.set_ylabel("number of learners")
    ax.set_title(f"accuracy heatmap ({mode} mode)")
    for i in range(len(n_values)):
        for j in range(len(d_values)):
            ax.text(j, i, f"{grid[i, j]:.3f}", ha="center", va="center",
                    color="white", fontsize=8)
    fig.colorbar(im, ax=ax, label="mean accuracy")
    _save(fig, path)


def plot_stability(summary, d_values, path):
    """Accuracy vs dimension with one-sigma error bars per model."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, per_d in summary["per_d"].items():
        means = [per_d[str(d)]["mean"] for d in d_values]
        sigmas = [per_d[str(d)]["sigma"] for d in d_values]
        ax.errorbar(d_values, means, yerr=sigmas, marker="o", capsize=3,
                    label=f"{name} (mu_sigma={summary['mu_sigma'][name]:.4f})",
                    color=MODEL_COLORS.get(name))
    ax.set_xscale("log")
    ax.set_xlabel("total dimension D")
    ax.set_ylabel("test accuracy")
    ax.set_title("stability across dimensions")
    ax.legend()
    _save(fig, path)


def plot_robustness(summaries, p_b_values, path):
    """Mean accuracy and MAD as a function of bit-flip probability."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    for name, summary in summaries.items():
        means = [summary[repr(float(p))]["mean"] for p in p_b_values]
        mads = [summary[repr(float(p))]["mad"] for p in p_b_values]
        color = MODEL_COLORS.get(name)
        ax1.plot(p_b_values, means, marker="o", label=name, color=color)
        ax2.plot(p_b_values, mads, marker="s", label=name, color=color)
    for ax, ylabel in ((ax1, "mean accuracy"), (ax2, "MAD of accuracy")):
        ax.set_xscale("symlog", linthresh=1e-7)
        ax.set_xlabel("bit-flip probability p_b")
        ax.set_ylabel(ylabel)
        ax.legend()
    fig.suptitle("robustness under bit-flip noise")
    _save(fig, path)


def plot_overfit(summary, r_values, path):
    """Macro accuracy vs imbalance ratio."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, per_r in summary.items():
        means = [per_r[repr(float(r))]["mean"] for r in r_values]
        ax.plot(r_values, means, marker="o", label=name, color=MODEL_COLORS.get(name))
    ax.set_xlabel("imbalance ratio r")
    ax.set_ylabel("macro accuracy")
    ax.set_title("imbalance resistance")
    ax.legend()
    _save(fig, path)


def plot_spectral(report, path):
    """Eigenvalue density on the bulk with the closed-form mean marked."""
    lo, hi = report["lambda_min"], report["lambda_max"]
    q, sigma = report["q"], report["sigma"]
    lam = np.linspace(max(lo, 1e-9), hi, 512)
    dens = np.sqrt(np.maximum((hi - lam) * (lam - lo), 0.0)) / (
        2.0 * np.pi * sigma ** 2 * q * lam)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lam, dens, label="eigenvalue density")
    ax.axvline(report["numeric_mean"], color="tab:green", ls="--",
               label=f"numeric mean {report['numeric_mean']:.4f}")
    ax.axvline(report["mean_approx"], color="tab:red", ls=":",
               label=f"closed-form mean {report['mean_approx']:.4f}")
    if report.get("empirical") is not None:
        ax.hist(report["empirical"], bins=60, density=True, alpha=0.3,
                label="empirical eigenvalues")
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("density")
    ax.set_title(f"Marchenko-Pastur bulk, q={q}")
    ax.legend()
    _save(fig, path)


def plot_span(reports, path):
    """Pairwise-similarity heatmaps with span-utilization captions."""
    fig, axes = plt.subplots(1, len(reports), figsize=(5 * len(reports), 4),
                             squeeze=False)
    for ax, (name, rep) in zip(axes[0], reports.items()):
        sims = np.asarray(rep["pairwise_sims"])
        im = ax.imshow(sims, vmin=-1, vmax=1, cmap="coolwarm")
        ax.set_title(f"{name}\nrank={rep['numeric_rank']}  sp={rep['sp']:.4g}")
        fig.colorbar(im, ax=ax)
    _save(fig, path)
