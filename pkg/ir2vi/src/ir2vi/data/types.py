"""Sample carriers shared by both domains: images, boxes and annotated samples."""

from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)

import numpy as np

from ir2vi.exceptions import ContractError, ShapeError


class Domain(StrEnum):
    IR = "IR"
    VI = "VI"


class ValueRange(StrEnum):
    UINT8 = "uint8"  # integers in [0, 255]
    NORMALIZED = "normalized"  # reals in [-1, 1]


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Single-channel H×W image tagged with exactly one value range.

    ``uint8`` images are stored as ``np.uint8``; ``normalized`` images as
    floating point arrays with every pixel in [-1, 1].
    """

    pixels: np.ndarray
    value_range: ValueRange

    def __post_init__(self) -> None:
        if self.pixels.ndim != 2:
            raise ShapeError(
                f"GrayImage must be 2-D (H×W), got shape {self.pixels.shape}"
            )
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ShapeError(f"GrayImage must be non-empty, got {self.pixels.shape}")
        if self.value_range is ValueRange.UINT8:
            if self.pixels.dtype != np.uint8:
                raise ContractError(
                    f"uint8 GrayImage needs dtype uint8, got {self.pixels.dtype}"
                )
        else:
            if not np.issubdtype(self.pixels.dtype, np.floating):
                raise ContractError(
                    f"normalized GrayImage needs a float dtype, got {self.pixels.dtype}"
                )
            if not np.isfinite(self.pixels).all():
                raise ContractError("normalized GrayImage contains non-finite values")
            lo, hi = float(self.pixels.min()), float(self.pixels.max())
            if lo < -1.0 or hi > 1.0:
                raise ContractError(
                    f"normalized GrayImage out of [-1, 1]: min={lo}, max={hi}"
                )

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def require(self, value_range: ValueRange) -> None:
        if self.value_range is not value_range:
            raise ContractError(
                f"expected a {value_range} image, got a {self.value_range} image"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.value_range is other.value_range and np.array_equal(
            self.pixels, other.pixels
        )


@dataclass(frozen=True, order=True)
class BBox:
    """Axis-aligned pixel box: left ``x``, top ``y``, width ``w``, height ``h``."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise ContractError(f"BBox.{name} must be an int, got {getattr(self, name)!r}")
        if self.w < 1 or self.h < 1:
            raise ContractError(f"BBox needs w >= 1 and h >= 1, got {self}")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def fits(self, height: int, width: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x2 <= width and self.y2 <= height

    def shifted(self, dx: int, dy: int) -> "BBox":
        return BBox(self.x + dx, self.y + dy, self.w, self.h)

    def clipped(self, height: int, width: int) -> "BBox | None":
        """Intersection with the ``height × width`` frame, or None if empty."""
        x1, y1 = max(self.x, 0), max(self.y, 0)
        x2, y2 = min(self.x2, width), min(self.y2, height)
        if x2 <= x1 or y2 <= y1:
            return None
        return BBox(x1, y1, x2 - x1, y2 - y1)

    def intersection_area(self, other: "BBox") -> int:
        iw = min(self.x2, other.x2) - max(self.x, other.x)
        ih = min(self.y2, other.y2) - max(self.y, other.y)
        return max(iw, 0) * max(ih, 0)

    def to_list(self) -> list[int]:
        return [int(self.x), int(self.y), int(self.w), int(self.h)]

    @classmethod
    def from_list(cls, values: list[int]) -> "BBox":
        if len(values) != 4:
            raise ContractError(f"BBox needs [x, y, w, h], got {values!r}")
        return cls(*(int(v) for v in values))


@dataclass(frozen=True)
class Sample:
    """An image, its object boxes and the domain it belongs to."""

    image: GrayImage
    boxes: tuple[BBox, ...]
    domain: Domain
    id: str
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for box in self.boxes:
            if not box.fits(self.image.height, self.image.width):
                raise ContractError(
                    f"Sample {self.id!r}: {box} outside {self.image.height}x{self.image.width} image"
                )
