"""Matplotlib figures rendered next to evaluation reports.

Three views of one experiment: per-document perplexity before/after the
attack, the score distributions against the decision threshold, and the
headline metric collapse.  All figures are written as PNG files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .detector import DetectorConfig, EvalReport, LABEL_AI

HUMAN_COLOR = "#2563eb"
AI_COLOR = "#dc2626"
ATTACKED_COLOR = "#7c2d12"


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.2), dpi=150)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def perplexity_divergence_figure(report: EvalReport, out_path: Path) -> None:
    """Per-document perplexity of AI docs, normal vs attacked extraction."""
    ai_docs = [d for d in report.per_doc if d.label == LABEL_AI]
    ai_docs.sort(key=lambda d: d.ppl_normal)
    xs = range(len(ai_docs))
    fig, ax = _new_axes(
        "Perplexity divergence on AI documents",
        "document (sorted by normal perplexity)",
        "character perplexity",
    )
    ax.plot(xs, [d.ppl_normal for d in ai_docs], ".", ms=4, color=AI_COLOR,
            label="normal extraction")
    ax.plot(xs, [d.ppl_attacked for d in ai_docs], ".", ms=4, color=ATTACKED_COLOR,
            label="attacked extraction")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def score_distribution_figure(
    report: EvalReport, config: DetectorConfig, out_path: Path
) -> None:
    """Histogram of perplexities by class, with the decision threshold."""
    human = [d.ppl_normal for d in report.per_doc if d.label != LABEL_AI]
    ai_normal = [d.ppl_normal for d in report.per_doc if d.label == LABEL_AI]
    ai_attacked = [d.ppl_attacked for d in report.per_doc if d.label == LABEL_AI]
    fig, ax = _new_axes(
        "Perplexity distributions", "character perplexity", "documents"
    )
    bins = 40
    ax.hist(human, bins=bins, alpha=0.55, color=HUMAN_COLOR, label="human")
    ax.hist(ai_normal, bins=bins, alpha=0.55, color=AI_COLOR, label="ai (normal)")
    ax.hist(ai_attacked, bins=bins, alpha=0.55, color=ATTACKED_COLOR, label="ai (attacked)")
    ax.axvline(config.threshold, color="black", lw=1.2, ls="--",
               label=f"threshold = {config.threshold:.2f}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def metric_collapse_figure(report: EvalReport, out_path: Path) -> None:
    """Accuracy / F1 / TPR@1%FPR before and after the attack."""
    names = ["accuracy", "f1 (ai)", "TPR@1%FPR"]
    normal = [report.normal.accuracy, report.normal.f1_ai, report.normal.tpr_at_1pct_fpr]
    attacked = [report.attacked.accuracy, report.attacked.f1_ai,
                report.attacked.tpr_at_1pct_fpr]
    fig, ax = _new_axes("Detector metrics, normal vs attacked pipeline", "", "score")
    width = 0.38
    xs = range(len(names))
    ax.bar([x - width / 2 for x in xs], normal, width, color=HUMAN_COLOR, label="normal")
    ax.bar([x + width / 2 for x in xs], attacked, width, color=ATTACKED_COLOR,
           label="attacked")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_report_figures(
    report: EvalReport, config: DetectorConfig, out_dir: str | Path
) -> list[Path]:
    """Render every report figure into `out_dir`; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    targets = [
        (perplexity_divergence_figure, out_dir / "perplexity_divergence.png"),
        (metric_collapse_figure, out_dir / "metric_collapse.png"),
    ]
    written = []
    for fn, path in targets:
        fn(report, path)
        written.append(path)
    dist_path = out_dir / "perplexity_distributions.png"
    score_distribution_figure(report, config, dist_path)
    written.append(dist_path)
    return written
