"""Figure rendering for the CLI report paths.

Every figure is a side product of a delimited output and is written as a
PNG with stripped metadata so repeated runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.4,
}


def _save(fig, path) -> None:
    fig.savefig(path, metadata={"Software": None}, bbox_inches="tight")
    plt.close(fig)


def save_fit_figure(result, coordinate_labels, path) -> None:
    """Coefficient profiles of the selected features across coordinates."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        xs = np.arange(len(coordinate_labels))
        for j in result.selected:
            name = result.feature_names[j] if result.feature_names else f"x{j + 1}"
            ax.plot(xs, result.beta[j], marker="o", markersize=2.5, label=name)
        ax.axhline(0.0, color="black", linewidth=0.6, alpha=0.5)
        ax.set_xlabel("response coordinate")
        ax.set_ylabel("coefficient")
        if len(coordinate_labels) <= 12:
            ax.set_xticks(xs)
            ax.set_xticklabels(coordinate_labels, rotation=45, ha="right")
        ax.legend(loc="best", fontsize=8)
        ax.set_title(f"selected {result.num_selected} features, objective {result.objective:.4g}")
        _save(fig, path)


def save_sweep_figure(ks, objectives, tights, path) -> None:
    """Objective against budget, marking certified points."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.2, 3.4))
        ks = np.asarray(ks)
        objectives = np.asarray(objectives)
        tights = np.asarray(tights, dtype=bool)
        ax.plot(ks, objectives, marker="o", markersize=4, color="tab:blue")
        if tights.any():
            ax.plot(ks[tights], objectives[tights], linestyle="none", marker="o",
                    markersize=7, markerfacecolor="none", markeredgecolor="tab:green",
                    label="certified")
            ax.legend(loc="best", fontsize=8)
        ax.set_xlabel("budget k")
        ax.set_ylabel("objective")
        ax.set_xticks(ks)
        _save(fig, path)


def save_study_figure(frame, study: str, path) -> None:
    """Per-scenario recovery proportion, plus estimation error when present.

    Wall-clock columns are deliberately left out so the figure bytes stay
    identical across reruns; timings live in results.csv and the manifest.
    """
    with plt.rc_context(_RC):
        has_err = "eaverage_mean" in frame.columns
        ncols = 2 if has_err else 1
        fig, axes = plt.subplots(1, ncols, figsize=(4.4 * ncols, 3.4), squeeze=False)
        axes = axes[0]
        idx = np.arange(len(frame))
        axes[0].bar(idx, frame["correct_prop"], color="tab:blue", width=0.7)
        axes[0].set_ylim(0.0, 1.05)
        axes[0].set_ylabel("correct selection proportion")
        if has_err:
            axes[1].bar(idx, frame["eaverage_mean"], width=0.7, color="tab:orange",
                        yerr=frame["eaverage_sd"], capsize=2)
            axes[1].set_ylabel("mean coefficient error")
        if study == "multivariate":
            labels = [
                f"n={r.n} p={r.p}\nrx={r.rho_x:g} ry={r.rho_y:g}\neff={r.effect:g}"
                for r in frame.itertuples()
            ]
        else:
            labels = [f"n={r.n} m={r.m}\nbudget={r.budget}" for r in frame.itertuples()]
        for ax in axes:
            ax.set_xticks(idx)
            ax.set_xticklabels(labels, fontsize=6)
        fig.suptitle(f"{study} study, {len(frame)} scenarios")
        _save(fig, path)


def save_curves_figure(xs, rows, path, xlabel: str, ylabel: str) -> None:
    """Overlay of embedded curves, one line per observation."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.6, 3.6))
        rows = np.asarray(rows)
        alpha = max(0.08, min(0.8, 20.0 / max(len(rows), 1)))
        for row in rows:
            ax.plot(xs, row, color="tab:blue", alpha=alpha, linewidth=0.9)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        _save(fig, path)
