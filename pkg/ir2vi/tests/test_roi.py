import math

import numpy as np
import torch
from django.test import SimpleTestCase

from ir2vi.data.types import BBox
from ir2vi.exceptions import ConfigError, ContractError
from ir2vi.roi import RoiPoolSpec, roi_pool, roi_pool_batch


def bilinear_reference(crop: np.ndarray, out: int) -> np.ndarray:
    """Half-pixel-centre bilinear resampling, written out per output pixel."""

    def axis(n_in: int, i: int) -> tuple[int, int, float]:
        src = max((i + 0.5) * n_in / out - 0.5, 0.0)
        lo = int(math.floor(src))
        hi = min(lo + 1, n_in - 1)
        return lo, hi, src - lo

    h, w = crop.shape
    result = np.empty((out, out))
    for i in range(out):
        y0, y1, fy = axis(h, i)
        for j in range(out):
            x0, x1, fx = axis(w, j)
            top = (1 - fx) * crop[y0, x0] + fx * crop[y0, x1]
            bottom = (1 - fx) * crop[y1, x0] + fx * crop[y1, x1]
            result[i, j] = (1 - fy) * top + fy * bottom
    return result


def max_bins_reference(crop: np.ndarray, out: int) -> np.ndarray:
    h, w = crop.shape
    result = np.empty((out, out))
    for i in range(out):
        for j in range(out):
            rows = slice(math.floor(i * h / out), math.ceil((i + 1) * h / out))
            cols = slice(math.floor(j * w / out), math.ceil((j + 1) * w / out))
            result[i, j] = crop[rows, cols].max()
    return result


def random_case(rng: np.random.Generator, size: int = 32):
    img = rng.uniform(-1, 1, size=(1, size, size))
    w, h = (int(v) for v in rng.integers(1, size + 1, size=2))
    box = BBox(int(rng.integers(0, size - w + 1)), int(rng.integers(0, size - h + 1)), w, h)
    return img, box


class RoiPoolTests(SimpleTestCase):
    def test_full_image_at_native_size_is_identity(self) -> None:
        img = torch.rand(1, 16, 16, dtype=torch.float64)
        out = roi_pool(img, [BBox(0, 0, 16, 16)], RoiPoolSpec(out_size=16))
        self.assertTrue(torch.equal(out[0], img))

    def test_constant_image_gives_constant_patches(self) -> None:
        img = torch.full((1, 20, 20), 0.25, dtype=torch.float64)
        for method in ("bilinear_resize", "max_bins"):
            out = roi_pool(img, [BBox(2, 3, 5, 9), BBox(0, 0, 20, 20)], RoiPoolSpec(8, method))
            self.assertEqual(tuple(out.shape), (2, 1, 8, 8))
            torch.testing.assert_close(out, torch.full_like(out, 0.25), rtol=0, atol=1e-12)

    def test_bilinear_matches_reference(self) -> None:
        rng = np.random.default_rng(0)
        spec = RoiPoolSpec(out_size=16)
        for _ in range(100):
            img, box = random_case(rng)
            out = roi_pool(torch.from_numpy(img), [box], spec)[0, 0].numpy()
            crop = img[0, box.y : box.y2, box.x : box.x2]
            self.assertLessEqual(float(np.abs(out - bilinear_reference(crop, 16)).max()), 1e-6)

    def test_max_bins_matches_reference(self) -> None:
        rng = np.random.default_rng(1)
        spec = RoiPoolSpec(out_size=8, method="max_bins")
        for _ in range(50):
            img, box = random_case(rng)
            out = roi_pool(torch.from_numpy(img), [box], spec)[0, 0].numpy()
            crop = img[0, box.y : box.y2, box.x : box.x2]
            np.testing.assert_array_equal(out, max_bins_reference(crop, 8))

    def test_pixels_outside_boxes_are_never_read(self) -> None:
        rng = np.random.default_rng(2)
        boxes = [BBox(3, 4, 10, 6), BBox(20, 18, 7, 9)]
        inside = np.zeros((32, 32), dtype=bool)
        for box in boxes:
            inside[box.y : box.y2, box.x : box.x2] = True
        img = rng.uniform(-1, 1, size=(1, 32, 32))
        noisy = img.copy()
        noisy[0][~inside] = rng.uniform(-1, 1, size=int((~inside).sum()))
        for method in ("bilinear_resize", "max_bins"):
            spec = RoiPoolSpec(16, method)
            a = roi_pool(torch.from_numpy(img), boxes, spec)
            b = roi_pool(torch.from_numpy(noisy), boxes, spec)
            self.assertTrue(torch.equal(a, b))

    def test_gradients_stay_inside_the_box(self) -> None:
        img = torch.rand(1, 12, 12, dtype=torch.float64, requires_grad=True)
        box = BBox(2, 5, 6, 4)
        roi_pool(img, [box], RoiPoolSpec(out_size=8)).sum().backward()
        grad = img.grad[0]
        self.assertTrue(bool((grad[box.y : box.y2, box.x : box.x2] > 0).any()))
        grad[box.y : box.y2, box.x : box.x2] = 0
        self.assertTrue(bool((grad == 0).all()))

    def test_empty_and_invalid_boxes(self) -> None:
        img = torch.zeros(1, 8, 8)
        self.assertEqual(tuple(roi_pool(img, [], RoiPoolSpec(4)).shape), (0, 1, 4, 4))
        with self.assertRaises(ContractError):
            roi_pool(img, [BBox(6, 6, 4, 4)], RoiPoolSpec(4))
        with self.assertRaises(ConfigError):
            RoiPoolSpec(out_size=1)


class RoiPoolBatchTests(SimpleTestCase):
    def test_weights_average_per_element_then_batch(self) -> None:
        images = torch.zeros(2, 1, 16, 16)
        boxes = ((BBox(0, 0, 4, 4),), (BBox(0, 0, 4, 4), BBox(4, 4, 4, 4), BBox(8, 8, 4, 4)))
        patches, weights = roi_pool_batch(images, boxes, RoiPoolSpec(4))
        self.assertEqual(tuple(patches.shape), (4, 1, 4, 4))
        np.testing.assert_allclose(weights.numpy(), [0.5, 1 / 6, 1 / 6, 1 / 6])
        self.assertAlmostEqual(float(weights.sum()), 1.0, places=6)

    def test_element_without_boxes(self) -> None:
        with self.assertRaises(ContractError):
            roi_pool_batch(torch.zeros(2, 1, 8, 8), ((BBox(0, 0, 2, 2),), ()), RoiPoolSpec(4))
