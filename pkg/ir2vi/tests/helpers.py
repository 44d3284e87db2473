"""Shared fixtures: micro networks, synthetic batches, sampled gradient checks."""

import os
import unittest

import numpy as np
import torch

from ir2vi.data.dataset import DomainBatch, TrainBatch
from ir2vi.data.types import BBox, Domain
from ir2vi.networks.config import DiscriminatorConfig, GeneratorConfig
from ir2vi.networks.sets import build_discriminator_set, build_mapping_pair
from ir2vi.roi import RoiPoolSpec

MICRO_GENERATOR = GeneratorConfig(base_filters=2, n_res_blocks=1, norm="instance")
MICRO_DISCRIMINATOR = DiscriminatorConfig(channel_plan=((4, 2), (8, 2)), norm="instance")
MICRO_ROI = RoiPoolSpec(out_size=8)

FD_STEP = 1e-5
FD_RTOL = 1e-4
FD_ATOL = 1e-8

slow = unittest.skipUnless(
    os.environ.get("IR2VI_SLOW_TESTS") == "1", "set IR2VI_SLOW_TESTS=1 to run"
)


def micro_networks(seed: int = 0, dtype: torch.dtype = torch.float64):
    pair = build_mapping_pair(MICRO_GENERATOR, seed)
    discs = build_discriminator_set(MICRO_DISCRIMINATOR, seed)
    for net in (*pair.named().values(), *discs.named().values()):
        net.to(dtype)
    return pair, discs


def random_batch(
    seed: int = 0,
    size: int = 8,
    batch: int = 2,
    dtype: torch.dtype = torch.float64,
) -> TrainBatch:
    """IR / VI batch in [-1, 1] with one or two boxes per element."""
    rng = np.random.default_rng(seed)

    def domain_batch(domain: Domain) -> DomainBatch:
        images = torch.from_numpy(rng.uniform(-1, 1, size=(batch, 1, size, size))).to(dtype)
        boxes = []
        for _ in range(batch):
            element = []
            for _ in range(int(rng.integers(1, 3))):
                w, h = (int(v) for v in rng.integers(2, size // 2 + 1, size=2))
                x, y = int(rng.integers(0, size - w + 1)), int(rng.integers(0, size - h + 1))
                element.append(BBox(x, y, w, h))
            boxes.append(tuple(element))
        ids = tuple(f"{domain}_{i}" for i in range(batch))
        return DomainBatch(images, tuple(boxes), domain, ids)

    return TrainBatch(x=domain_batch(Domain.IR), y=domain_batch(Domain.VI))


def gradient_agreement(loss_fn, params, n_samples: int = 100, seed: int = 0) -> float:
    """Share of sampled coordinates where autograd matches central differences.

    ``loss_fn`` is re-evaluated from scratch for every perturbation.
    """
    params = [p for p in params if p.requires_grad]
    analytic = torch.autograd.grad(loss_fn(), params, allow_unused=True)
    analytic = [torch.zeros_like(p) if g is None else g for p, g in zip(params, analytic)]

    rng = np.random.default_rng(seed)
    sizes = np.array([p.numel() for p in params], dtype=np.float64)
    agree = 0
    for _ in range(n_samples):
        k = int(rng.choice(len(params), p=sizes / sizes.sum()))
        i = int(rng.integers(0, params[k].numel()))
        flat = params[k].data.view(-1)
        original = flat[i].item()
        with torch.no_grad():
            flat[i] = original + FD_STEP
            plus = float(loss_fn())
            flat[i] = original - FD_STEP
            minus = float(loss_fn())
            flat[i] = original
        numeric = (plus - minus) / (2 * FD_STEP)
        a = float(analytic[k].view(-1)[i])
        if abs(a - numeric) <= FD_RTOL * max(abs(a), abs(numeric)) + FD_ATOL:
            agree += 1
    return agree / n_samples
