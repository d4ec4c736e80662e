"""Figure rendering for the report path.

Each function takes plain data already present in a report and writes one
PNG; the CLI calls these when --plots is given, dropping the files next to
the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_norm_experiment(rows: list[dict], path) -> None:
    """Observed ratios per p with the theoretical bound shape overlaid."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ps = sorted({r["p"] for r in rows})
    for p in ps:
        vals = [r["ratio"] for r in rows if r["p"] == p]
        ax.scatter([p] * len(vals), vals, s=8, alpha=0.35, color="tab:blue")
    ax.plot(
        ps,
        [next(r["theory_bound"] for r in rows if r["p"] == p) for p in ps],
        "r--",
        label="(p^2/(p-1))^beta",
    )
    ax.set_yscale("log")
    ax.set_xlabel("p = 2k")
    ax.set_ylabel("||T_m x||_p / ||x||_p")
    ax.set_title("Multiplier norm ratios vs bound shape")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_histogram(values, path, title: str, xlabel: str, vline: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.hist(values, bins=80, color="tab:blue", alpha=0.8)
    if vline is not None:
        ax.axvline(vline, color="red", linestyle="--", label=f"bound {vline}")
        ax.legend()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
