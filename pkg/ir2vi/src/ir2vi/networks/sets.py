"""The six networks of one training run: two mappings and four critics."""

from dataclasses import dataclass

import numpy as np
from torch import nn

from ir2vi.networks.builder import build_generator, build_patch_discriminator
from ir2vi.networks.config import DiscriminatorConfig, GeneratorConfig
from ir2vi.networks.discriminator import PatchDiscriminator
from ir2vi.networks.generator import Generator


def network_seed(seed: int, slot: int) -> int:
    """Independent init seed per network slot, derived from the root seed."""
    return int(np.random.SeedSequence([seed, slot]).generate_state(1)[0])


@dataclass
class MappingPair:
    G: Generator  # IR -> VI
    F: Generator  # VI -> IR

    def named(self) -> dict[str, nn.Module]:
        return {"G": self.G, "F": self.F}


@dataclass
class DiscriminatorSet:
    vi_global: PatchDiscriminator
    ir_global: PatchDiscriminator
    vi_roi: PatchDiscriminator
    ir_roi: PatchDiscriminator

    def named(self) -> dict[str, nn.Module]:
        return {
            "D_vi_global": self.vi_global,
            "D_ir_global": self.ir_global,
            "D_vi_roi": self.vi_roi,
            "D_ir_roi": self.ir_roi,
        }

    def roi(self) -> tuple[PatchDiscriminator, PatchDiscriminator]:
        return self.vi_roi, self.ir_roi


def build_mapping_pair(config: GeneratorConfig, seed: int) -> MappingPair:
    return MappingPair(
        G=build_generator(config, network_seed(seed, 0)),
        F=build_generator(config, network_seed(seed, 1)),
    )


def build_discriminator_set(config: DiscriminatorConfig, seed: int) -> DiscriminatorSet:
    return DiscriminatorSet(
        *(build_patch_discriminator(config, network_seed(seed, slot)) for slot in range(2, 6))
    )
