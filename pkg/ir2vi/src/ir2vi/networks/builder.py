"""Config -> freshly initialized network.

Networks are built from a seed every time; no trained state ever lives in a config.
"""

import torch
from torch import nn

from ir2vi.networks.config import DiscriminatorConfig, GeneratorConfig
from ir2vi.networks.discriminator import PatchDiscriminator
from ir2vi.networks.generator import Generator

INIT_STD = 0.02
_CONV_TYPES = (nn.Conv2d, nn.ConvTranspose2d)
_NORM_TYPES = (nn.BatchNorm2d, nn.InstanceNorm2d)


def _as_generator(rng: torch.Generator | int) -> torch.Generator:
    if isinstance(rng, torch.Generator):
        return rng
    return torch.Generator().manual_seed(int(rng))


@torch.no_grad()
def init_weights(module: nn.Module, rng: torch.Generator, std: float = INIT_STD) -> None:
    """Conv weights ~ N(0, std²), biases 0; norm scale 1, shift 0.

    Layers are visited in registration order, so a seed fixes every array.
    """
    for m in module.modules():
        if isinstance(m, _CONV_TYPES):
            m.weight.copy_(torch.randn(m.weight.shape, generator=rng) * std)
            if m.bias is not None:
                m.bias.zero_()
        elif isinstance(m, _NORM_TYPES) and m.affine:
            m.weight.fill_(1.0)
            m.bias.zero_()


def build_generator(config: GeneratorConfig, rng: torch.Generator | int) -> Generator:
    gen = Generator(config)
    init_weights(gen, _as_generator(rng))
    return gen


def build_patch_discriminator(
    config: DiscriminatorConfig, rng: torch.Generator | int
) -> PatchDiscriminator:
    disc = PatchDiscriminator(config)
    init_weights(disc, _as_generator(rng))
    return disc


def count_convolutions(module: nn.Module) -> int:
    return sum(isinstance(m, _CONV_TYPES) for m in module.modules())
