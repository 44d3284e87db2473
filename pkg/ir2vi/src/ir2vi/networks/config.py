"""Canonical, hashed network configurations.

The defaults are the published architectures:

- generator  ``c7s1-32, d64, d128, R128 x 9, u64, u32, c7s1-1, c7s1-1^structure, F``
- discriminator ``C64, C128, C256, C512, C512`` + a 1-channel output convolution
"""

from dataclasses import asdict, dataclass

from ir2vi.exceptions import ConfigError
from ir2vi.hashing import payload_hash

NORM_TAGS = ("batch", "instance")
PUBLISHED_CHANNEL_PLAN: tuple[tuple[int, int], ...] = (
    (64, 2),
    (128, 2),
    (256, 2),
    (512, 2),
    (512, 1),
)


@dataclass(frozen=True)
class GeneratorConfig:
    """Structure-connected residual auto-encoder.

    Parameters
    ----------
    base_filters : int
        Filters of the ``c7s1`` stem; the down path doubles them twice.
    n_res_blocks : int
        Residual blocks at the bottleneck.
    in_channels, out_channels : int
        Image channels (grayscale: 1).
    norm : str
        ``"batch"`` or ``"instance"``.
    padding_mode : str
        Only ``"reflect"`` is supported.
    structure_connection : bool
        Add the 7×7 input-to-output shortcut fused by ``sum`` + ``tanh``.
    """

    base_filters: int = 32
    n_res_blocks: int = 9
    in_channels: int = 1
    out_channels: int = 1
    norm: str = "batch"
    padding_mode: str = "reflect"
    structure_connection: bool = True

    def __post_init__(self) -> None:
        if self.base_filters < 1:
            raise ConfigError(f"base_filters must be >= 1, got {self.base_filters}")
        if self.n_res_blocks < 0:
            raise ConfigError(f"n_res_blocks must be >= 0, got {self.n_res_blocks}")
        if self.in_channels < 1 or self.out_channels < 1:
            raise ConfigError(
                f"channels must be >= 1, got in={self.in_channels} out={self.out_channels}"
            )
        if self.norm not in NORM_TAGS:
            raise ConfigError(f"norm must be one of {NORM_TAGS}, got {self.norm!r}")
        if self.padding_mode != "reflect":
            raise ConfigError(f"padding_mode must be 'reflect', got {self.padding_mode!r}")

    def config_hash(self) -> str:
        return payload_hash(asdict(self))


@dataclass(frozen=True)
class DiscriminatorConfig:
    """PatchGAN critic: 4×4 Convolution-Norm-LeakyReLU per plan entry, then a 1-channel conv.

    Parameters
    ----------
    channel_plan : tuple of (filters, stride)
        No normalization on the first entry.
    in_channels : int
        Image channels.
    leaky_slope : float
        Negative slope of every LeakyReLU.
    norm : str
        Follows the generator's norm tag.
    """

    channel_plan: tuple[tuple[int, int], ...] = PUBLISHED_CHANNEL_PLAN
    in_channels: int = 1
    leaky_slope: float = 0.2
    norm: str = "batch"

    def __post_init__(self) -> None:
        # JSON configs hand us lists; freeze them so the config stays hashable
        object.__setattr__(
            self, "channel_plan", tuple((int(f), int(s)) for f, s in self.channel_plan)
        )
        if not self.channel_plan:
            raise ConfigError("channel_plan must have at least one entry")
        for filters, stride in self.channel_plan:
            if filters < 1:
                raise ConfigError(f"channel_plan filters must be >= 1, got {filters}")
            if stride not in (1, 2):
                raise ConfigError(f"channel_plan strides must be 1 or 2, got {stride}")
        if self.in_channels < 1:
            raise ConfigError(f"in_channels must be >= 1, got {self.in_channels}")
        if self.leaky_slope < 0:
            raise ConfigError(f"leaky_slope must be >= 0, got {self.leaky_slope}")
        if self.norm not in NORM_TAGS:
            raise ConfigError(f"norm must be one of {NORM_TAGS}, got {self.norm!r}")

    @property
    def strides(self) -> tuple[int, ...]:
        """Strides of every convolution, output convolution included."""
        return tuple(s for _, s in self.channel_plan) + (1,)

    def config_hash(self) -> str:
        return payload_hash(asdict(self))
