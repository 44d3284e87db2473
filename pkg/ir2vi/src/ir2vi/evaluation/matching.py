"""Greedy detection-to-ground-truth matching."""

from typing import Mapping, Sequence

from ir2vi.data.types import BBox
from ir2vi.evaluation.detector import Detection


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two pixel boxes."""
    inter = a.intersection_area(b)
    union = a.area + b.area - inter
    return inter / union if union > 0 else 0.0


def sort_by_score(detections: Sequence[Detection]) -> list[Detection]:
    """Descending score; ties keep their input order."""
    return sorted(detections, key=lambda d: -d.score)


def match_detections(
    detections: Sequence[Detection],
    ground_truth: Mapping[str, Sequence[BBox]],
    iou_threshold: float = 0.5,
) -> list[tuple[Detection, bool]]:
    """Flag every detection TP or FP, highest score first.

    A detection is a TP iff its best overlap among the still unmatched ground
    truths of its image reaches ``iou_threshold``; that ground truth is then
    consumed. Overlap ties go to the earlier ground truth.
    """
    matched: dict[str, set[int]] = {}
    flags = []
    for det in sort_by_score(detections):
        taken = matched.setdefault(det.image_id, set())
        best_iou, best_index = 0.0, None
        for index, gt in enumerate(ground_truth.get(det.image_id, ())):
            if index in taken:
                continue
            overlap = iou(det.box, gt)
            if overlap > best_iou:
                best_iou, best_index = overlap, index
        hit = best_index is not None and best_iou >= iou_threshold
        if hit:
            taken.add(best_index)
        flags.append((det, hit))
    return flags
