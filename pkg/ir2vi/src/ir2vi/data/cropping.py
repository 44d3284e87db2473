"""Object-aware random cropping (every crop keeps at least one object)."""

import numpy as np

from ir2vi.data.types import BBox, GrayImage, Sample
from ir2vi.exceptions import ContractError, ShapeError

# A box survives a crop only if this share of it remains visible
BOX_RETENTION = 0.25
MAX_CROP_ATTEMPTS = 100


def _boxes_in_window(
    boxes: tuple[BBox, ...], top: int, left: int, size: int
) -> tuple[BBox, ...]:
    """Translate boxes into window coordinates, clip them, drop slivers.

    The retained share is measured against the largest area the box could show
    inside a ``size × size`` window, so objects larger than the window survive a
    window centred on them.
    """
    kept = []
    for box in boxes:
        clipped = box.shifted(-left, -top).clipped(size, size)
        if clipped is None:
            continue
        reference = min(box.w, size) * min(box.h, size)
        if clipped.area >= BOX_RETENTION * reference:
            kept.append(clipped)
    return tuple(kept)


def _centered_origin(box: BBox, size: int, height: int, width: int) -> tuple[int, int]:
    cy, cx = box.y + box.h // 2, box.x + box.w // 2
    top = int(np.clip(cy - size // 2, 0, height - size))
    left = int(np.clip(cx - size // 2, 0, width - size))
    return top, left


def crop_with_object(
    sample: Sample, size: int = 256, rng: np.random.Generator | None = None
) -> Sample:
    """Random ``size × size`` crop that keeps at least one annotated object.

    Rejection-samples up to ``MAX_CROP_ATTEMPTS`` uniform windows, then falls
    back to a window centred on a uniformly chosen box.
    """
    rng = rng if rng is not None else np.random.default_rng()
    height, width = sample.image.shape
    if height < size or width < size:
        raise ShapeError(
            f"Sample {sample.id!r} is {height}x{width}, smaller than the {size}x{size} crop"
        )
    if not sample.boxes:
        raise ContractError(f"Sample {sample.id!r} has no boxes to crop around")

    for _ in range(MAX_CROP_ATTEMPTS):
        top = int(rng.integers(0, height - size + 1))
        left = int(rng.integers(0, width - size + 1))
        boxes = _boxes_in_window(sample.boxes, top, left, size)
        if boxes:
            break
    else:
        anchor = sample.boxes[int(rng.integers(0, len(sample.boxes)))]
        top, left = _centered_origin(anchor, size, height, width)
        boxes = _boxes_in_window(sample.boxes, top, left, size)

    pixels = sample.image.pixels[top : top + size, left : left + size].copy()
    return Sample(
        image=GrayImage(pixels, sample.image.value_range),
        boxes=boxes,
        domain=sample.domain,
        id=sample.id,
        metadata={**sample.metadata, "crop_origin": (top, left)},
    )
