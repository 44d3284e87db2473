"""Synthetic IR / VI scenes with ground-truth boxes, a desk-scale data source.

IR scenes: dark, noisy background with overly bright, smooth, low-texture
blobs at the object locations.
VI scenes: mid-gray, faintly textured background with strongly textured,
sharp-edged objects.
"""

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from ir2vi.data.manifest import DatasetManifest, ManifestEntry, write_manifest, write_png
from ir2vi.data.types import BBox, Domain, GrayImage, Sample, ValueRange
from ir2vi.exceptions import ConfigError
from ir2vi.hashing import payload_hash
from ir2vi.logging_config import logger

MAX_PLACEMENT_ATTEMPTS = 200


@dataclass(frozen=True)
class SceneSpec:
    """Geometry of generated scenes.

    Parameters
    ----------
    height, width : int
        Image size in pixels.
    min_objects, max_objects : int
        Inclusive range of the object count per scene.
    min_object_size, max_object_size : int
        Inclusive range of object box sides in pixels.
    min_gap : int
        Minimum free margin between two objects.
    require_objects : bool
        Scenes feed object-aware cropping, which needs at least one object.
    """

    height: int = 64
    width: int = 64
    min_objects: int = 1
    max_objects: int = 3
    min_object_size: int = 10
    max_object_size: int = 20
    min_gap: int = 8
    require_objects: bool = True

    def __post_init__(self) -> None:
        if self.height < 1 or self.width < 1:
            raise ConfigError(f"SceneSpec size must be positive, got {self.height}x{self.width}")
        if not 0 <= self.min_objects <= self.max_objects:
            raise ConfigError(
                f"SceneSpec needs 0 <= min_objects <= max_objects, "
                f"got {self.min_objects}..{self.max_objects}"
            )
        if self.require_objects and self.min_objects == 0:
            raise ConfigError(
                "SceneSpec allows zero objects but object-aware cropping requires >= 1"
            )
        if not 1 <= self.min_object_size <= self.max_object_size:
            raise ConfigError(
                f"SceneSpec needs 1 <= min_object_size <= max_object_size, "
                f"got {self.min_object_size}..{self.max_object_size}"
            )
        if self.max_object_size > min(self.height, self.width):
            raise ConfigError(
                f"max_object_size {self.max_object_size} exceeds the "
                f"{self.height}x{self.width} image"
            )
        if self.min_gap < 0:
            raise ConfigError(f"min_gap must be >= 0, got {self.min_gap}")

    def config_hash(self) -> str:
        return payload_hash(asdict(self))


def _place_boxes(rng: np.random.Generator, spec: SceneSpec) -> list[BBox]:
    target = int(rng.integers(spec.min_objects, spec.max_objects + 1))
    boxes: list[BBox] = []
    attempts = 0
    while len(boxes) < target and attempts < MAX_PLACEMENT_ATTEMPTS:
        attempts += 1
        w = int(rng.integers(spec.min_object_size, spec.max_object_size + 1))
        h = int(rng.integers(spec.min_object_size, spec.max_object_size + 1))
        x = int(rng.integers(0, spec.width - w + 1))
        y = int(rng.integers(0, spec.height - h + 1))
        candidate = BBox(x, y, w, h)
        grown = BBox(x - spec.min_gap, y - spec.min_gap, w + 2 * spec.min_gap, h + 2 * spec.min_gap)
        if all(grown.intersection_area(b) == 0 for b in boxes):
            boxes.append(candidate)

    if len(boxes) < spec.min_objects:
        raise ConfigError(
            f"Could only place {len(boxes)} of {spec.min_objects} required objects in a "
            f"{spec.height}x{spec.width} scene; enlarge the scene or shrink the objects"
        )
    return boxes


def _shape_mask(box: BBox, height: int, width: int, ellipse: bool) -> np.ndarray:
    mask = np.zeros((height, width), dtype=np.float64)
    if not ellipse:
        mask[box.y : box.y2, box.x : box.x2] = 1.0
        return mask
    yy, xx = np.mgrid[box.y : box.y2, box.x : box.x2]
    cy, cx = box.y + (box.h - 1) / 2, box.x + (box.w - 1) / 2
    ry, rx = box.h / 2, box.w / 2
    inside = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
    mask[box.y : box.y2, box.x : box.x2] = inside
    return mask


def _smooth_field(rng: np.random.Generator, shape: tuple[int, int], sigma: float) -> np.ndarray:
    """Zero-mean, unit-peak low-frequency variation."""
    field = ndimage.gaussian_filter(rng.standard_normal(shape), sigma=sigma, mode="reflect")
    peak = np.abs(field).max()
    return field / peak if peak > 0 else field


def _render_ir(rng: np.random.Generator, spec: SceneSpec, boxes: list[BBox]) -> np.ndarray:
    shape = (spec.height, spec.width)
    canvas = 35.0 + 12.0 * _smooth_field(rng, shape, sigma=8.0)
    canvas += rng.normal(0.0, 6.0, size=shape)
    for box in boxes:
        # Thermal blur: soft edges, almost no interior texture
        mask = _shape_mask(box, *shape, ellipse=True)
        mask = ndimage.gaussian_filter(mask, sigma=1.0, mode="constant")
        level = rng.uniform(195.0, 235.0) + rng.normal(0.0, 2.0, size=shape)
        canvas = canvas * (1.0 - mask) + level * mask
    return canvas


def _render_vi(rng: np.random.Generator, spec: SceneSpec, boxes: list[BBox]) -> np.ndarray:
    shape = (spec.height, spec.width)
    canvas = 128.0 + 15.0 * _smooth_field(rng, shape, sigma=10.0)
    canvas += rng.normal(0.0, 2.0, size=shape)
    yy, xx = np.mgrid[0 : spec.height, 0 : spec.width]
    for box in boxes:
        mask = _shape_mask(box, *shape, ellipse=bool(rng.integers(0, 2)))
        theta = rng.uniform(0.0, np.pi)
        period = rng.uniform(3.0, 6.0)
        stripes = 35.0 * np.sin(2 * np.pi * (xx * np.cos(theta) + yy * np.sin(theta)) / period)
        texture = rng.uniform(80.0, 170.0) + stripes + rng.normal(0.0, 30.0, size=shape)
        canvas = np.where(mask > 0, texture, canvas)
    return canvas


def synth_scene(
    rng: np.random.Generator,
    domain: Domain,
    spec: SceneSpec,
    sample_id: str = "scene",
) -> Sample:
    """Generate one annotated scene; byte-identical for an identically seeded ``rng``."""
    boxes = _place_boxes(rng, spec)
    render = _render_ir if domain is Domain.IR else _render_vi
    pixels = np.clip(np.rint(render(rng, spec, boxes)), 0, 255).astype(np.uint8)
    return Sample(
        image=GrayImage(pixels, ValueRange.UINT8),
        boxes=tuple(boxes),
        domain=domain,
        id=sample_id,
    )


def scene_rng(seed: int, domain: Domain, index: int) -> np.random.Generator:
    """Independent stream per (seed, domain, index): scenes never depend on generation order."""
    return np.random.default_rng([seed, 0 if domain is Domain.IR else 1, index])


def write_synthetic_dataset(
    spec: SceneSpec, count: int, seed: int, out_dir: Path
) -> dict[Domain, Path]:
    """Render ``count`` scenes per domain as PNGs plus one manifest per domain.

    Layout: ``out_dir/{ir,vi}/<id>.png`` and ``out_dir/{ir,vi}_manifest.jsonl``.
    Byte-identical for identical ``(spec, count, seed)``.
    """
    out_dir = Path(out_dir)
    manifests = {}
    for domain in (Domain.IR, Domain.VI):
        prefix = str(domain).lower()
        entries = []
        for index in range(count):
            sample = synth_scene(scene_rng(seed, domain, index), domain, spec, f"{prefix}_{index:06d}")
            file = f"{prefix}/{sample.id}.png"
            write_png(sample.image, out_dir / file)
            entries.append(ManifestEntry(sample.id, file, domain, sample.boxes))
        path = out_dir / f"{prefix}_manifest.jsonl"
        write_manifest(DatasetManifest(out_dir, tuple(entries)), path)
        manifests[domain] = path
    logger.info(f"Wrote {count} IR + {count} VI scenes to {out_dir}")
    return manifests
