from pathlib import Path

import matplotlib.pyplot as plt
from django.core.management.base import CommandError

from ir2vi.evaluation.metrics import load_report
from ir2vi.evaluation.plotting import plot_pr
from ir2vi.management.base import IR2VICommand


class Command(IR2VICommand):
    help = "Overlay the PR curves of one or more report.json files in one figure."
    uses_run_config = False

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("reports", nargs="+", type=Path)
        parser.add_argument("--labels", nargs="+", default=None)
        parser.add_argument("--out", type=Path, required=True, help="Figure file (.png, .pdf, ...)")
        parser.add_argument("--title", default="Precision-Recall")

    def run(self, **options):
        paths = options["reports"]
        labels = options["labels"] or [p.parent.name or p.stem for p in paths]
        if len(labels) != len(paths):
            raise CommandError(
                f"{len(labels)} labels for {len(paths)} reports", returncode=2
            )
        fig = plot_pr(
            [(label, load_report(path)) for label, path in zip(labels, paths)],
            options["out"],
            options["title"],
        )
        plt.close(fig)
        self.stdout.write(f"Wrote {options['out']}")
