"""Optimization protocol of one training run."""

from dataclasses import asdict, dataclass, field

from ir2vi.exceptions import ConfigError
from ir2vi.hashing import payload_hash
from ir2vi.losses import LossWeights
from ir2vi.networks.config import NORM_TAGS


@dataclass(frozen=True)
class TrainConfig:
    """Canonical, hashed training protocol.

    Parameters
    ----------
    lr : float
        Adam learning rate of the constant phase.
    epochs_const, epochs_decay : int
        Constant-lr epochs, then linear decay to zero over ``epochs_decay``.
    batch_size : int
        Images per domain per iteration.
    weights : LossWeights
        ``lambda_cyc`` and ``lambda_roi``.
    seed : int
        Root seed: network init, data order, crops and replay draws derive from it.
    adam_beta1, adam_beta2 : float
        Adam moment decays.
    replay_buffer : int
        Capacity of the fake-image history fed to the global critics (0 disables it).
    norm : str
        Normalization tag shared by every network.
    checkpoint_every : int
        Save a checkpoint every this many epochs (the last epoch always saves).
    crop_size : int
        Side of the object-containing training crops.
    adversarial_mode : str
        ``"log"`` (published objective) or ``"lsgan"`` (least squares).
    equalize_ir : bool
        Histogram-equalize IR inputs.
    num_workers : int
        DataLoader workers; batch order never depends on it.
    """

    lr: float = 2e-4
    epochs_const: int = 20
    epochs_decay: int = 20
    batch_size: int = 2
    weights: LossWeights = field(default_factory=LossWeights)
    seed: int = 0
    adam_beta1: float = 0.5
    adam_beta2: float = 0.999
    replay_buffer: int = 50
    norm: str = "batch"
    checkpoint_every: int = 1
    crop_size: int = 256
    adversarial_mode: str = "log"
    equalize_ir: bool = True
    num_workers: int = 0

    def __post_init__(self) -> None:
        if not self.lr > 0:
            raise ConfigError(f"lr must be > 0, got {self.lr}")
        if self.epochs_const < 0 or self.epochs_decay < 0:
            raise ConfigError(
                f"epochs must be >= 0, got const={self.epochs_const} decay={self.epochs_decay}"
            )
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise ConfigError(f"Adam betas must lie in [0, 1), got {self.adam_beta1}, {self.adam_beta2}")
        if self.replay_buffer < 0:
            raise ConfigError(f"replay_buffer must be >= 0, got {self.replay_buffer}")
        if self.norm not in NORM_TAGS:
            raise ConfigError(f"norm must be one of {NORM_TAGS}, got {self.norm!r}")
        if self.checkpoint_every < 1:
            raise ConfigError(f"checkpoint_every must be >= 1, got {self.checkpoint_every}")
        if self.crop_size < 4 or self.crop_size % 4:
            raise ConfigError(f"crop_size must be a positive multiple of 4, got {self.crop_size}")
        if self.adversarial_mode not in ("log", "lsgan"):
            raise ConfigError(f"adversarial_mode must be 'log' or 'lsgan', got {self.adversarial_mode!r}")
        if self.num_workers < 0:
            raise ConfigError(f"num_workers must be >= 0, got {self.num_workers}")

    @property
    def total_epochs(self) -> int:
        return self.epochs_const + self.epochs_decay

    def config_hash(self) -> str:
        return payload_hash(asdict(self))
