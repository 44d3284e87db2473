"""Per-iteration loss CSV: ``iteration, epoch`` then every ``LossReport`` column."""

from pathlib import Path

import pandas as pd

from ir2vi.losses import LossReport

COLUMNS = ["iteration", "epoch", *LossReport.columns()]


class MetricsLog:
    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self._rows: list[dict] = []

    def append(self, iteration: int, epoch: int, report: LossReport) -> None:
        self._rows.append({"iteration": iteration, "epoch": epoch, **report.as_row()})

    def flush(self) -> None:
        if not self._rows:
            return
        frame = pd.DataFrame(self._rows, columns=COLUMNS)
        new = not self.path.exists()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(self.path, mode="w" if new else "a", header=new, index=False)
        self._rows.clear()

    def truncate(self, iteration: int) -> None:
        """Drop rows past ``iteration`` so a resumed run does not duplicate them."""
        if not self.path.exists():
            return
        frame = read_metrics(self.path)
        frame[frame["iteration"] <= iteration].to_csv(self.path, index=False)


def read_metrics(path: Path) -> pd.DataFrame:
    return pd.read_csv(path)
