"""Structure-connected residual auto-encoder, used for both G: IR->VI and F: VI->IR.

Parameter names follow the module tree and are the checkpoint keys::

    main.stem.conv.weight        c7s1-k
    main.down1.conv.weight       dk   (down1, down2)
    main.res3.body.conv1.weight  Rk   (res0 ... res{n-1}, conv1 / conv2)
    main.up1.conv.weight         uk   (up1, up2)
    main.out.conv.weight         final c7s1-1, no norm, no activation
    structure.conv.weight        c7s1-1^structure, no norm, no activation
"""

from collections import OrderedDict
from typing import Literal

import torch
from torch import nn

from ir2vi.data.preprocess import from_tensor, to_tensor
from ir2vi.data.types import GrayImage, ValueRange
from ir2vi.exceptions import ShapeError
from ir2vi.networks.config import GeneratorConfig

Mode = Literal["train", "eval"]


def make_norm(tag: str, channels: int) -> nn.Module:
    if tag == "batch":
        return nn.BatchNorm2d(channels, affine=True)
    return nn.InstanceNorm2d(channels, affine=True, track_running_stats=False)


def conv7(in_ch: int, out_ch: int, norm: str | None) -> nn.Sequential:
    """``c7s1-k``: reflection-padded 7×7 stride-1 conv (+ norm + ReLU)."""
    layers: list[tuple[str, nn.Module]] = [
        ("pad", nn.ReflectionPad2d(3)),
        ("conv", nn.Conv2d(in_ch, out_ch, kernel_size=7, bias=norm is None)),
    ]
    if norm is not None:
        layers += [("norm", make_norm(norm, out_ch)), ("act", nn.ReLU())]
    return nn.Sequential(OrderedDict(layers))


def down(in_ch: int, out_ch: int, norm: str) -> nn.Sequential:
    """``dk``: 3×3 stride-2 conv, reflect padding, norm, ReLU."""
    return nn.Sequential(
        OrderedDict(
            conv=nn.Conv2d(
                in_ch, out_ch, kernel_size=3, stride=2, padding=1,
                padding_mode="reflect", bias=False,
            ),
            norm=make_norm(norm, out_ch),
            act=nn.ReLU(),
        )
    )


def up(in_ch: int, out_ch: int, norm: str) -> nn.Sequential:
    """``uk``: 3×3 fractional-stride conv; output exactly twice the input size."""
    return nn.Sequential(
        OrderedDict(
            conv=nn.ConvTranspose2d(
                in_ch, out_ch, kernel_size=3, stride=2, padding=1,
                output_padding=1, bias=False,
            ),
            norm=make_norm(norm, out_ch),
            act=nn.ReLU(),
        )
    )


class ResidualBlock(nn.Module):
    """``Rk``: conv-norm-ReLU-conv-norm with an additive skip, no ReLU after the sum."""

    def __init__(self, channels: int, norm: str) -> None:
        super().__init__()
        self.body = nn.Sequential(
            OrderedDict(
                pad1=nn.ReflectionPad2d(1),
                conv1=nn.Conv2d(channels, channels, kernel_size=3, bias=False),
                norm1=make_norm(norm, channels),
                act=nn.ReLU(),
                pad2=nn.ReflectionPad2d(1),
                conv2=nn.Conv2d(channels, channels, kernel_size=3, bias=False),
                norm2=make_norm(norm, channels),
            )
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.body(x)


class Generator(nn.Module):
    def __init__(self, config: GeneratorConfig) -> None:
        super().__init__()
        self.config = config
        k = config.base_filters
        layers: list[tuple[str, nn.Module]] = [
            ("stem", conv7(config.in_channels, k, config.norm)),
            ("down1", down(k, 2 * k, config.norm)),
            ("down2", down(2 * k, 4 * k, config.norm)),
        ]
        layers += [
            (f"res{i}", ResidualBlock(4 * k, config.norm)) for i in range(config.n_res_blocks)
        ]
        layers += [
            ("up1", up(4 * k, 2 * k, config.norm)),
            ("up2", up(2 * k, k, config.norm)),
            ("out", conv7(k, config.out_channels, norm=None)),
        ]
        self.main = nn.Sequential(OrderedDict(layers))
        self.structure = (
            conv7(config.in_channels, config.out_channels, norm=None)
            if config.structure_connection
            else None
        )

    @property
    def min_size(self) -> int:
        # Reflection padding at the 1/4-resolution bottleneck needs >= 2 pixels
        return 8 if self.config.n_res_blocks else 4

    def check_input(self, x: torch.Tensor) -> None:
        if x.ndim != 4 or x.shape[1] != self.config.in_channels:
            raise ShapeError(
                f"Generator expects (B, {self.config.in_channels}, H, W), got {tuple(x.shape)}"
            )
        h, w = x.shape[-2:]
        if h % 4 or w % 4:
            raise ShapeError(f"Generator input H and W must be divisible by 4, got {h}x{w}")
        if min(h, w) < self.min_size:
            raise ShapeError(f"Generator input must be at least {self.min_size} px, got {h}x{w}")

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        self.check_input(x)
        fused = self.main(x)
        if self.structure is not None:
            fused = fused + self.structure(x)
        return torch.tanh(fused)


def translate(gen: Generator, x: GrayImage, mode: Mode = "eval") -> GrayImage:
    """Translate one normalized image; output has the same H×W, values in (-1, 1)."""
    x.require(ValueRange.NORMALIZED)
    param = next(gen.parameters())
    batch = to_tensor(x, dtype=param.dtype).unsqueeze(0).to(param.device)
    gen.train(mode == "train")
    with torch.set_grad_enabled(mode == "train"):
        out = gen(batch)
    return from_tensor(out[0])
