"""Intensity preprocessing: histogram equalization and [-1, 1] normalization.

Equalization is applied to night-time IR inputs only; visible images are never
equalized.
"""

import numpy as np
import torch

from ir2vi.data.types import GrayImage, ValueRange


def histogram_equalize(img: GrayImage) -> GrayImage:
    """CDF-remap equalization over 256 bins.

    Each level ``v`` maps to ``round((cdf(v) - cdf_min) / (N - cdf_min) * 255)``
    where ``cdf_min`` is the smallest non-zero CDF value. A constant image has
    ``N == cdf_min`` (0/0) and is returned unchanged.
    """
    img.require(ValueRange.UINT8)
    pixels = img.pixels
    hist = np.bincount(pixels.ravel(), minlength=256)
    cdf = hist.cumsum()
    n = int(cdf[-1])
    cdf_min = int(cdf[np.flatnonzero(hist)[0]])
    if n == cdf_min:
        return GrayImage(pixels.copy(), ValueRange.UINT8)

    lut = np.rint((cdf - cdf_min) / (n - cdf_min) * 255.0)
    lut = np.clip(lut, 0, 255).astype(np.uint8)
    return GrayImage(lut[pixels], ValueRange.UINT8)


def normalize(img: GrayImage) -> GrayImage:
    """Affine map ``v -> v / 127.5 - 1`` from uint8 to [-1, 1]."""
    img.require(ValueRange.UINT8)
    out = img.pixels.astype(np.float64) / 127.5 - 1.0
    return GrayImage(np.clip(out, -1.0, 1.0), ValueRange.NORMALIZED)


def denormalize(img: GrayImage) -> GrayImage:
    """Inverse of :func:`normalize`, rounded to the nearest intensity level."""
    img.require(ValueRange.NORMALIZED)
    out = np.rint((img.pixels.astype(np.float64) + 1.0) * 127.5)
    return GrayImage(np.clip(out, 0, 255).astype(np.uint8), ValueRange.UINT8)


def to_tensor(img: GrayImage, dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Normalized image -> ``(1, H, W)`` tensor."""
    img.require(ValueRange.NORMALIZED)
    return torch.from_numpy(np.ascontiguousarray(img.pixels)).to(dtype).unsqueeze(0)


def from_tensor(tensor: torch.Tensor) -> GrayImage:
    """``(1, H, W)`` or ``(H, W)`` tensor in [-1, 1] -> normalized image."""
    array = tensor.detach().cpu().to(torch.float64).squeeze(0).numpy()
    return GrayImage(np.clip(array, -1.0, 1.0), ValueRange.NORMALIZED)


def prepare_input(img: GrayImage, equalize: bool) -> GrayImage:
    """Raw uint8 image -> normalized network input, equalizing IR inputs first."""
    if equalize:
        img = histogram_equalize(img)
    return normalize(img)
