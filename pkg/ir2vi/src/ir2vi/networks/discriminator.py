"""PatchGAN critic shared by the global and the ROI discriminators (never their weights).

Outputs a 2-D map of logits; the sigmoid lives inside the losses.
Checkpoint keys: ``layers.{i}.conv.weight``, ``layers.{i}.norm.weight`` (i >= 1),
``head.weight``, ``head.bias``.
"""

from collections import OrderedDict

import torch
from torch import nn

from ir2vi.data.preprocess import to_tensor
from ir2vi.data.types import GrayImage, ValueRange
from ir2vi.exceptions import ShapeError
from ir2vi.networks.config import DiscriminatorConfig
from ir2vi.networks.generator import Mode, make_norm

KERNEL = 4
PADDING = 1


def conv_output_size(n: int, stride: int) -> int:
    return (n + 2 * PADDING - KERNEL) // stride + 1


def score_map_size(n: int, config: DiscriminatorConfig) -> int:
    """Side of the score map for an ``n``-pixel side, or <= 0 if too small."""
    for stride in config.strides:
        if n < 1:
            return n
        n = conv_output_size(n, stride)
    return n


def receptive_field(config: DiscriminatorConfig) -> int:
    """Input pixels seen by one logit: ``rf <- (rf - 1) * stride + 4`` from the output back."""
    rf = 1
    for stride in reversed(config.strides):
        rf = (rf - 1) * stride + KERNEL
    return rf


def min_input_size(config: DiscriminatorConfig) -> int:
    n = 1
    while score_map_size(n, config) < 1:
        n += 1
    return n


class PatchDiscriminator(nn.Module):
    def __init__(self, config: DiscriminatorConfig) -> None:
        super().__init__()
        self.config = config
        blocks = []
        in_ch = config.in_channels
        for i, (filters, stride) in enumerate(config.channel_plan):
            first = i == 0
            parts: list[tuple[str, nn.Module]] = [
                (
                    "conv",
                    nn.Conv2d(in_ch, filters, KERNEL, stride=stride, padding=PADDING, bias=first),
                )
            ]
            if not first:
                parts.append(("norm", make_norm(config.norm, filters)))
            parts.append(("act", nn.LeakyReLU(config.leaky_slope)))
            blocks.append(nn.Sequential(OrderedDict(parts)))
            in_ch = filters
        self.layers = nn.Sequential(*blocks)
        self.head = nn.Conv2d(in_ch, 1, KERNEL, stride=1, padding=PADDING, bias=True)
        self._min_size = min_input_size(config)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.ndim != 4 or x.shape[1] != self.config.in_channels:
            raise ShapeError(
                f"Discriminator expects (B, {self.config.in_channels}, H, W), got {tuple(x.shape)}"
            )
        h, w = x.shape[-2:]
        if min(h, w) < self._min_size:
            raise ShapeError(
                f"Discriminator input {h}x{w} is below the {self._min_size} px minimum"
            )
        return self.head(self.layers(x))


def discriminate(d: PatchDiscriminator, img: GrayImage, mode: Mode = "eval") -> torch.Tensor:
    """Score one normalized image; returns the ``(h, w)`` logit map."""
    img.require(ValueRange.NORMALIZED)
    param = next(d.parameters())
    batch = to_tensor(img, dtype=param.dtype).unsqueeze(0).to(param.device)
    d.train(mode == "train")
    with torch.set_grad_enabled(mode == "train"):
        return d(batch)[0, 0]
