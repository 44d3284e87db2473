"""Overlay the PR curves of several evaluation reports in one figure."""

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from ir2vi.evaluation.metrics import APReport  # noqa: E402


def plot_pr(
    reports: Sequence[tuple[str, APReport]],
    out_file: Path | None = None,
    title: str = "Precision-Recall",
) -> Figure:
    """One labeled step curve per report; saved to ``out_file`` when given."""
    fig, ax = plt.subplots(figsize=(6, 5))
    for label, report in reports:
        recalls = [0.0, *report.curve.recalls.tolist()]
        precisions = [1.0, *report.curve.precisions.tolist()]
        ax.step(recalls, precisions, where="post", label=f"{label} (AP={report.ap:.3f})")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("Recall")
    ax.set_ylabel("Precision")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if reports:
        ax.legend(loc="lower left")
    fig.tight_layout()

    if out_file is not None:
        out_file = Path(out_file)
        out_file.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_file, dpi=150)
    return fig
