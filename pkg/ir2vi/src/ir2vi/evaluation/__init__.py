"""Detection-proxy evaluation: detectors, matching, PR curves and AP.

``ir2vi.evaluation.runner`` (translate + detect over a manifest) and
``ir2vi.evaluation.plotting`` are imported explicitly.
"""

from ir2vi.evaluation.detector import (
    BlobDetector,
    BlobDetectorConfig,
    Detection,
    Detector,
    OracleDetector,
    blob_detector,
)
from ir2vi.evaluation.matching import iou, match_detections
from ir2vi.evaluation.metrics import APReport, PRCurve, average_precision, load_report
from ir2vi.evaluation.structure import gradient_correlation, mean_structure_correlation

__all__ = [
    "APReport",
    "BlobDetector",
    "BlobDetectorConfig",
    "Detection",
    "Detector",
    "OracleDetector",
    "PRCurve",
    "average_precision",
    "blob_detector",
    "gradient_correlation",
    "iou",
    "load_report",
    "match_detections",
    "mean_structure_correlation",
]
