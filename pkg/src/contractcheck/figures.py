"""Figure rendering for compliance reports.

Writes PNG files next to the report: a bar chart of the three metrics and
a behavior-count summary. matplotlib is imported lazily so that the
library stays importable (and the CLI fast) when no figures are requested.
"""

from __future__ import annotations

from pathlib import Path

_METRIC_COLORS = ("#4c72b0", "#55a868", "#c44e52")


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name) or "report"


def render_report_figures(report, out_dir, digits: int = 2) -> list[Path]:
    from matplotlib.figure import Figure

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{_safe(report.candidate_name)}_vs_{_safe(report.ground_name)}"
    written: list[Path] = []

    m = report.metrics
    names = ["FES", "Fitness", "Precision"]
    scores = [m.fes, m.fitness, m.precision]
    values = [s.numerator / s.denominator for s in scores]

    fig = Figure(figsize=(4.6, 3.4), dpi=150)
    ax = fig.add_subplot(111)
    bars = ax.bar(names, values, color=_METRIC_COLORS, width=0.6)
    for bar, score in zip(bars, scores):
        ax.annotate(
            score.rendered(digits),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center", va="bottom", fontsize=9,
        )
    ax.set_ylim(0, 1.08)
    ax.set_ylabel("score")
    ax.set_title(f"{report.candidate_name} vs {report.ground_name}", fontsize=10)
    fig.tight_layout()
    path = out / f"{stem}_metrics.png"
    fig.savefig(path)
    written.append(path)

    counts = report.counts
    labels = [
        "ground total", "ground strict", "ground covered",
        "candidate total", "candidate embedded", "candidate pruned",
    ]
    heights = [
        counts["ground_total"], counts["ground_strictly_matched"],
        counts["ground_covered"], counts["candidate_total"],
        counts["candidate_embedded"], counts["pruned"],
    ]
    fig = Figure(figsize=(5.6, 3.4), dpi=150)
    ax = fig.add_subplot(111)
    ax.barh(range(len(labels)), heights, color="#8172b2")
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    for i, h in enumerate(heights):
        ax.annotate(str(h), (h, i), va="center", ha="left", fontsize=8)
    ax.set_xlabel("behaviors")
    ax.set_title("behavior counts", fontsize=10)
    fig.tight_layout()
    path = out / f"{stem}_behaviors.png"
    fig.savefig(path)
    written.append(path)
    return written
