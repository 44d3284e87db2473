"""Generator and PatchGAN discriminator networks"""

from ir2vi.networks.builder import build_generator, build_patch_discriminator
from ir2vi.networks.config import DiscriminatorConfig, GeneratorConfig
from ir2vi.networks.discriminator import (
    PatchDiscriminator,
    discriminate,
    receptive_field,
    score_map_size,
)
from ir2vi.networks.generator import Generator, translate

__all__ = [
    "DiscriminatorConfig",
    "Generator",
    "GeneratorConfig",
    "PatchDiscriminator",
    "build_generator",
    "build_patch_discriminator",
    "discriminate",
    "receptive_field",
    "score_map_size",
    "translate",
]
