"""Structure preservation: how well a translation keeps the input's edges."""

from typing import Iterable

import numpy as np
from scipy import ndimage

from ir2vi.data.types import GrayImage
from ir2vi.evaluation.detector import unit_intensity
from ir2vi.exceptions import ShapeError


def gradient_magnitude(pixels: np.ndarray) -> np.ndarray:
    """Sobel gradient magnitude, reflect boundary."""
    gx = ndimage.sobel(pixels, axis=1, mode="reflect")
    gy = ndimage.sobel(pixels, axis=0, mode="reflect")
    return np.hypot(gx, gy)


def gradient_correlation(a: GrayImage, b: GrayImage) -> float:
    """Pearson correlation of the two gradient-magnitude maps (0 if either is flat)."""
    if a.shape != b.shape:
        raise ShapeError(f"cannot correlate a {a.shape} image with a {b.shape} image")
    ga = gradient_magnitude(unit_intensity(a)).ravel()
    gb = gradient_magnitude(unit_intensity(b)).ravel()
    ga, gb = ga - ga.mean(), gb - gb.mean()
    denom = np.sqrt((ga @ ga) * (gb @ gb))
    if denom == 0:
        return 0.0
    return float(np.clip((ga @ gb) / denom, -1.0, 1.0))


def mean_structure_correlation(pairs: Iterable[tuple[GrayImage, GrayImage]]) -> float:
    """Mean absolute per-image gradient correlation over (input, output) pairs."""
    values = [abs(gradient_correlation(a, b)) for a, b in pairs]
    return float(np.mean(values)) if values else 0.0
