"""Report figures.

Every CLI report path can render a PNG next to its delimited output.
Rendering is headless (Agg) and deterministic apart from matplotlib
versioning.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .classify import CATEGORIES  # noqa: E402


def ecdf_figure(
    curves: dict[str, list[tuple[float, float]]],
    means: dict[str, float],
    out_path: str | Path,
) -> None:
    """Step plot of one ECDF per method, with dotted mean markers."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for method in sorted(curves):
        points = curves[method]
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        (line,) = ax.step(xs, ys, where="post", label=method)
        mean = means.get(method)
        if mean is not None:
            ax.axvline(mean, linestyle=":", linewidth=1.0, color=line.get_color())
    ax.set_xlabel("per-token NLL (nats)")
    ax.set_ylabel("cumulative fraction of tokens")
    ax.set_ylim(0.0, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def scatter_figure(
    xs, ys, xlabel: str, ylabel: str, r: float, out_path: str | Path
) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.scatter(xs, ys, s=18)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(f"pearson r = {r:+.3f}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def error_report_figure(report: dict, out_path: str | Path) -> None:
    """Grouped bars: error-category percentages per benchmark kind."""
    kinds = sorted(report.get("kinds", {}))
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    width = 0.8 / max(len(kinds), 1)
    for j, kind in enumerate(kinds):
        pct = report["kinds"][kind]["percentages"]
        xs = [i + j * width for i in range(len(CATEGORIES))]
        ax.bar(xs, [pct.get(c, 0.0) for c in CATEGORIES], width=width, label=kind)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(CATEGORIES))])
    ax.set_xticklabels(CATEGORIES)
    ax.set_ylabel("% of incorrect responses")
    if kinds:
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
