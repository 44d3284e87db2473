"""ROI pooling ``R(.)``: crop annotated regions and resample them to a fixed size.

Patch k only ever reads the pixels inside box k.
"""

from dataclasses import asdict, dataclass
from typing import Literal, Sequence

import torch
import torch.nn.functional as F

from ir2vi.data.types import BBox
from ir2vi.exceptions import ConfigError, ContractError, ShapeError
from ir2vi.hashing import payload_hash

PoolMethod = Literal["bilinear_resize", "max_bins"]


@dataclass(frozen=True)
class RoiPoolSpec:
    """``bilinear_resize`` (default, dense gradients) or ``max_bins`` (Fast R-CNN max pooling)."""

    out_size: int = 64
    method: PoolMethod = "bilinear_resize"

    def __post_init__(self) -> None:
        if self.out_size < 2:
            raise ConfigError(f"RoiPoolSpec.out_size must be >= 2, got {self.out_size}")
        if self.method not in ("bilinear_resize", "max_bins"):
            raise ConfigError(f"Unknown ROI pooling method {self.method!r}")

    def config_hash(self) -> str:
        return payload_hash(asdict(self))


def roi_pool(img: torch.Tensor, boxes: Sequence[BBox], spec: RoiPoolSpec) -> torch.Tensor:
    """Pool every box of one ``(C, H, W)`` image into ``(K, C, out, out)``.

    An empty box list gives an empty ``(0, C, out, out)`` stack.
    """
    if img.ndim != 3:
        raise ShapeError(f"roi_pool expects a (C, H, W) tensor, got {tuple(img.shape)}")
    channels, height, width = img.shape
    size = (spec.out_size, spec.out_size)
    if not boxes:
        return img.new_zeros((0, channels, *size))

    patches = []
    for box in boxes:
        if not box.fits(height, width):
            raise ContractError(f"ROI {box} lies outside the {height}x{width} image")
        crop = img[:, box.y : box.y2, box.x : box.x2].unsqueeze(0)
        if spec.method == "bilinear_resize":
            patch = F.interpolate(crop, size=size, mode="bilinear", align_corners=False)
        else:
            # bin i spans [floor(i*h/out), ceil((i+1)*h/out))
            patch = F.adaptive_max_pool2d(crop, size)
        patches.append(patch)
    return torch.cat(patches, dim=0)


def roi_pool_batch(
    images: torch.Tensor,
    boxes: Sequence[Sequence[BBox]],
    spec: RoiPoolSpec,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Pool a ``(B, C, H, W)`` batch.

    Returns the ``(N, C, out, out)`` patch stack and, per patch, the weight
    ``1 / (B * boxes_of_its_element)`` so that a weighted sum averages over
    the boxes of each element, then over the batch.
    """
    if images.ndim != 4 or len(boxes) != images.shape[0]:
        raise ShapeError(
            f"roi_pool_batch needs (B, C, H, W) images and B box lists, "
            f"got {tuple(images.shape)} and {len(boxes)} lists"
        )
    batch = images.shape[0]
    stacks, weights = [], []
    for b, element_boxes in enumerate(boxes):
        if not element_boxes:
            raise ContractError(f"Batch element {b} has no boxes; ROI losses need at least one")
        stacks.append(roi_pool(images[b], element_boxes, spec))
        weights += [1.0 / (batch * len(element_boxes))] * len(element_boxes)
    return torch.cat(stacks, dim=0), images.new_tensor(weights)
