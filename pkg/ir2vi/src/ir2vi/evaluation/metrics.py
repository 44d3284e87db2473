"""Precision-recall curves and all-points interpolated average precision."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from ir2vi.exceptions import ContractError


@dataclass(frozen=True)
class PRCurve:
    """``(recall, precision)`` after each score cutoff, highest score first."""

    points: tuple[tuple[float, float], ...]
    thresholds: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.thresholds):
            raise ContractError(
                f"PRCurve has {len(self.points)} points but {len(self.thresholds)} thresholds"
            )

    @property
    def recalls(self) -> np.ndarray:
        return np.array([r for r, _ in self.points], dtype=np.float64)

    @property
    def precisions(self) -> np.ndarray:
        return np.array([p for _, p in self.points], dtype=np.float64)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "threshold": list(self.thresholds),
                "precision": self.precisions,
                "recall": self.recalls,
            }
        )


@dataclass(frozen=True)
class APReport:
    ap: float
    n_images: int
    n_gt: int
    curve: PRCurve
    n_detections: int = 0
    n_skipped: int = 0
    metadata: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "ap": self.ap,
            "n_images": self.n_images,
            "n_gt": self.n_gt,
            "n_detections": self.n_detections,
            "n_skipped": self.n_skipped,
            "curve": {
                "recall": self.curve.recalls.tolist(),
                "precision": self.curve.precisions.tolist(),
                "threshold": list(self.curve.thresholds),
            },
            **self.metadata,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "APReport":
        curve = payload["curve"]
        known = {"ap", "n_images", "n_gt", "n_detections", "n_skipped", "curve"}
        return cls(
            ap=float(payload["ap"]),
            n_images=int(payload["n_images"]),
            n_gt=int(payload["n_gt"]),
            curve=PRCurve(
                points=tuple(zip(map(float, curve["recall"]), map(float, curve["precision"]))),
                thresholds=tuple(float(t) for t in curve["threshold"]),
            ),
            n_detections=int(payload.get("n_detections", 0)),
            n_skipped=int(payload.get("n_skipped", 0)),
            metadata={k: v for k, v in payload.items() if k not in known},
        )


def load_report(path: Path) -> APReport:
    try:
        return APReport.from_json(json.loads(Path(path).read_text()))
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractError(f"{path} is not an evaluation report: {exc}") from exc


def interpolated_ap(recalls: np.ndarray, precisions: np.ndarray) -> float:
    """Area under the precision envelope (all-points interpolation)."""
    mrec = np.concatenate(([0.0], recalls, [1.0]))
    mpre = np.concatenate(([0.0], precisions, [0.0]))
    for i in range(mpre.size - 1, 0, -1):
        mpre[i - 1] = max(mpre[i - 1], mpre[i])
    changed = np.flatnonzero(mrec[1:] != mrec[:-1])
    return float(np.sum((mrec[changed + 1] - mrec[changed]) * mpre[changed + 1]))


def average_precision(
    flags: Sequence[bool],
    n_gt: int,
    scores: Sequence[float] | None = None,
    n_images: int = 0,
) -> APReport:
    """AP of TP/FP ``flags`` already ordered by descending score.

    Each distinct score is one cutoff: detections sharing a score enter the
    curve together, so their order among themselves never changes the AP.
    Without ``scores`` every prefix of ``flags`` is a cutoff. With
    ``n_gt == 0`` the AP is 1.0 when there are no detections and 0.0 otherwise.
    """
    if n_gt < 0:
        raise ContractError(f"n_gt must be >= 0, got {n_gt}")
    flags = np.asarray(flags, dtype=bool)
    if scores is None:
        # rank-based cutoffs when the caller only has the ordering
        cutoffs = np.arange(flags.size)
        thresholds = tuple(1.0 - i / max(len(flags), 1) for i in range(len(flags)))
    else:
        if len(scores) != len(flags):
            raise ContractError(f"{len(scores)} scores for {len(flags)} flags")
        values = np.asarray(scores, dtype=np.float64)
        if np.any(np.diff(values) > 0):
            raise ContractError("scores must be ordered from highest to lowest")
        # last index of every run of equal scores
        run_ends = np.append(values[1:] != values[:-1], True)[: values.size]
        cutoffs = np.flatnonzero(run_ends)
        thresholds = tuple(float(values[i]) for i in cutoffs)

    tp = np.cumsum(flags)[cutoffs]
    fp = np.cumsum(~flags)[cutoffs]
    precision = tp / np.maximum(tp + fp, 1)
    recall = tp / n_gt if n_gt else np.zeros_like(precision, dtype=np.float64)
    curve = PRCurve(
        points=tuple(zip(recall.astype(float).tolist(), precision.astype(float).tolist())),
        thresholds=thresholds,
    )

    if n_gt == 0:
        ap = 1.0 if flags.size == 0 else 0.0
    elif flags.size == 0:
        ap = 0.0
    else:
        ap = interpolated_ap(recall.astype(np.float64), precision.astype(np.float64))
    return APReport(ap=ap, n_images=n_images, n_gt=n_gt, curve=curve, n_detections=int(flags.size))
