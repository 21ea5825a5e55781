"""Optional figure rendering for the CLI report paths.

Import of matplotlib is deferred to call time and forced onto the Agg
backend so headless runs work; nothing in the numerical contract depends on
this module.  Each function writes one PNG next to the delimited output.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def plot_density(curve, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(curve.grid, curve.values.real, lw=1.2, label="re")
    if np.max(np.abs(curve.values.imag)) > 1e-12:
        ax.plot(curve.grid, curve.values.imag, lw=1.0, ls="--", label="im")
    ax.set_xlabel("lambda")
    ax.set_ylabel(f"<{curve.y_label}, delta(lambda) {curve.x_label}>")
    ax.set_title(f"{curve.kernel.kind} width {curve.kernel.width:g}")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_stone_study(eps_values, errors, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(eps_values, errors, "o-", lw=1.2)
    ax.set_xlabel("eps")
    ax.set_ylabel("deviation from extrapolated limit")
    ax.set_title("resolvent-limit sweep")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_model_comparison(x, closed, oracle, label, path) -> None:
    plt = _pyplot()
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(x, np.real(closed), lw=1.2, label="closed form")
    axes[0].plot(x, np.real(oracle), lw=1.0, ls="--", label="projector")
    axes[0].set_ylabel("re")
    axes[0].legend(loc="best")
    axes[0].set_title(label)
    axes[1].plot(x, np.abs(np.asarray(closed) - np.asarray(oracle)), lw=1.0, color="crimson")
    axes[1].set_ylabel("abs difference")
    axes[1].set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_suite(case_ids, observed, tolerances, path) -> None:
    plt = _pyplot()
    idx = np.arange(len(case_ids))
    floor = 1e-17
    fig, ax = plt.subplots(figsize=(8, 0.45 * max(4, len(case_ids))))
    ax.barh(idx, np.maximum(np.asarray(observed, dtype=float), floor), height=0.6,
            color=["seagreen" if o <= t else "crimson"
                   for o, t in zip(observed, tolerances)])
    for i, t in enumerate(tolerances):
        ax.plot([max(t, floor)] * 2, [i - 0.35, i + 0.35], color="black", lw=1.0)
    ax.set_yticks(idx)
    ax.set_yticklabels(case_ids, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("observed error (bar) vs tolerance (tick)")
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
