"""Detector interface and the shipped desk-scale blob detector.

The blob detector responds to local high-frequency texture, the appearance of
objects in visible imagery: smooth thermal blobs score low, textured objects
with sharp edges score high. Any learned detector can be plugged in through
the ``Detector`` protocol.
"""

import math
from dataclasses import asdict, dataclass
from typing import Mapping, Protocol, Sequence

import numpy as np
from scipy import ndimage

from ir2vi.data.types import BBox, GrayImage, ValueRange
from ir2vi.exceptions import ConfigError, ContractError
from ir2vi.hashing import payload_hash


@dataclass(frozen=True)
class Detection:
    box: BBox
    score: float
    image_id: str

    def __post_init__(self) -> None:
        if not math.isfinite(self.score) or not 0.0 <= self.score <= 1.0:
            raise ContractError(f"Detection score must be finite and in [0, 1], got {self.score}")

    def to_json(self) -> dict:
        return {"image_id": self.image_id, "box": self.box.to_list(), "score": self.score}


class Detector(Protocol):
    def detect(self, image: GrayImage, image_id: str) -> list[Detection]: ...


@dataclass(frozen=True)
class BlobDetectorConfig:
    """Texture-energy blob detector.

    Parameters
    ----------
    sigma : float
        Gaussian scale separating texture from smooth structure.
    window : int
        Side of the box filter averaging the texture residual.
    threshold : float
        Texture energy (intensity units in [0, 1]) above which a pixel is salient.
    min_area : int
        Smallest component kept, in pixels.
    min_fill : float
        Share of a (hole-filled) component that must itself be salient.
    edge_fraction : float
        Box edges sit where the energy falls to this share of the component's
        median energy. The box filter blurs a straight edge linearly, so 0.5
        lands on the edge itself.
    """

    sigma: float = 1.0
    window: int = 5
    threshold: float = 0.06
    min_area: int = 16
    min_fill: float = 0.5
    edge_fraction: float = 0.5

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.threshold <= 0:
            raise ConfigError(f"threshold must be > 0, got {self.threshold}")
        if self.min_area < 1:
            raise ConfigError(f"min_area must be >= 1, got {self.min_area}")
        if not 0.0 <= self.min_fill <= 1.0:
            raise ConfigError(f"min_fill must lie in [0, 1], got {self.min_fill}")
        if not 0.0 < self.edge_fraction < 1.0:
            raise ConfigError(f"edge_fraction must lie in (0, 1), got {self.edge_fraction}")

    def config_hash(self) -> str:
        return payload_hash(asdict(self))


def unit_intensity(img: GrayImage) -> np.ndarray:
    """Pixels rescaled to [0, 1] whatever the range tag."""
    if img.value_range is ValueRange.UINT8:
        return img.pixels.astype(np.float64) / 255.0
    return (img.pixels.astype(np.float64) + 1.0) / 2.0


def texture_energy(pixels: np.ndarray, cfg: BlobDetectorConfig) -> np.ndarray:
    residual = np.abs(pixels - ndimage.gaussian_filter(pixels, sigma=cfg.sigma, mode="reflect"))
    return ndimage.uniform_filter(residual, size=cfg.window, mode="reflect")


def _edge_box(
    energy: np.ndarray,
    labels: np.ndarray,
    index: int,
    window: tuple[slice, slice],
    cfg: BlobDetectorConfig,
) -> BBox:
    """Box of the pixels around component ``index`` whose energy reaches the edge level.

    The search stays within the filter halo of the component and off every
    other component. At least half of the component reaches its own median,
    so the box is never empty.
    """
    pad = cfg.window // 2 + 1
    height, width = energy.shape
    ys = slice(max(window[0].start - pad, 0), min(window[0].stop + pad, height))
    xs = slice(max(window[1].start - pad, 0), min(window[1].stop + pad, width))
    local = labels[ys, xs]
    core = local == index
    near = ndimage.binary_dilation(core, structure=np.ones((3, 3), dtype=bool), iterations=pad)
    near &= (local == 0) | core
    level = cfg.edge_fraction * float(np.median(energy[ys, xs][core]))
    extent = near & (energy[ys, xs] >= level)
    rows = np.flatnonzero(extent.any(axis=1))
    cols = np.flatnonzero(extent.any(axis=0))
    y0, x0 = ys.start + int(rows[0]), xs.start + int(cols[0])
    return BBox(x0, y0, xs.start + int(cols[-1]) + 1 - x0, ys.start + int(rows[-1]) + 1 - y0)


def blob_detector(
    img: GrayImage, cfg: BlobDetectorConfig, image_id: str = ""
) -> list[Detection]:
    """Threshold texture energy, label connected components, box each at its edge level.

    score = mean component energy / peak image energy. Deterministic; sorted by
    descending score.
    """
    energy = texture_energy(unit_intensity(img), cfg)
    salient = energy > cfg.threshold
    if not salient.any():
        return []

    mask = ndimage.binary_fill_holes(ndimage.binary_opening(salient))
    labels, _ = ndimage.label(mask)
    peak = float(energy.max())

    detections = []
    for index, window in enumerate(ndimage.find_objects(labels), start=1):
        if window is None:
            continue
        component = labels[window] == index
        if component.sum() < cfg.min_area:
            continue
        if salient[window][component].mean() < cfg.min_fill:
            continue
        score = float(energy[window][component].mean()) / peak
        detections.append(
            Detection(_edge_box(energy, labels, index, window, cfg), min(score, 1.0), image_id)
        )
    return sorted(detections, key=lambda d: (-d.score, d.box))


class BlobDetector:
    def __init__(self, cfg: BlobDetectorConfig | None = None) -> None:
        self.cfg = cfg or BlobDetectorConfig()

    def detect(self, image: GrayImage, image_id: str) -> list[Detection]:
        return blob_detector(image, self.cfg, image_id)


class OracleDetector:
    """Returns the ground-truth boxes with score 1: the upper bound of the protocol."""

    def __init__(self, ground_truth: Mapping[str, Sequence[BBox]]) -> None:
        self.ground_truth = ground_truth

    def detect(self, image: GrayImage, image_id: str) -> list[Detection]:
        return [Detection(box, 1.0, image_id) for box in self.ground_truth.get(image_id, ())]
