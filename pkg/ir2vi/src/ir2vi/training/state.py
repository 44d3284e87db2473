"""Training state and checkpoint archives.

A checkpoint is a ``torch.save`` dict::

    format          "ir2vi-checkpoint/1"
    run_config      RunConfig.to_dict()
    config_hash     RunConfig.config_hash()
    seed            root seed
    epoch           epochs completed
    iteration       optimizer steps completed
    networks        {"G", "F", "D_vi_global", "D_ir_global", "D_vi_roi", "D_ir_roi"} -> state_dict
    optimizers      {"generators", "discriminators"} -> state_dict
    replay          {"vi", "ir"} -> ReplayBuffer.state_dict()

Checkpoints are named ``epoch_{epoch:04d}.pt`` inside ``<run_dir>/checkpoints``.
"""

import itertools
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from ir2vi.exceptions import CheckpointError
from ir2vi.logging_config import logger
from ir2vi.networks.generator import Generator
from ir2vi.networks.sets import (
    DiscriminatorSet,
    MappingPair,
    build_discriminator_set,
    build_mapping_pair,
)
from ir2vi.run_config import RunConfig
from ir2vi.training.replay import ReplayBuffer

CHECKPOINT_FORMAT = "ir2vi-checkpoint/1"
REPLAY_SLOT = 6


@dataclass
class TrainState:
    config: RunConfig
    pair: MappingPair
    discs: DiscriminatorSet
    opt_g: torch.optim.Adam
    opt_d: torch.optim.Adam
    replay_vi: ReplayBuffer
    replay_ir: ReplayBuffer
    epoch: int = 0
    iteration: int = 0

    def networks(self) -> dict[str, torch.nn.Module]:
        return {**self.pair.named(), **self.discs.named()}

    def set_lr(self, lr: float) -> None:
        for opt in (self.opt_g, self.opt_d):
            for group in opt.param_groups:
                group["lr"] = lr


def _adam(params, cfg: RunConfig) -> torch.optim.Adam:
    train = cfg.train
    return torch.optim.Adam(params, lr=train.lr, betas=(train.adam_beta1, train.adam_beta2))


def build_train_state(cfg: RunConfig) -> TrainState:
    """Six freshly initialized networks, one Adam over G+F, one over the four critics."""
    seed = cfg.train.seed
    pair = build_mapping_pair(cfg.generator, seed)
    discs = build_discriminator_set(cfg.discriminator, seed)
    opt_g = _adam(itertools.chain(pair.G.parameters(), pair.F.parameters()), cfg)
    opt_d = _adam(
        itertools.chain.from_iterable(d.parameters() for d in discs.named().values()), cfg
    )
    replay_seq = np.random.SeedSequence([seed, REPLAY_SLOT]).spawn(2)
    return TrainState(
        config=cfg,
        pair=pair,
        discs=discs,
        opt_g=opt_g,
        opt_d=opt_d,
        replay_vi=ReplayBuffer(cfg.train.replay_buffer, np.random.default_rng(replay_seq[0])),
        replay_ir=ReplayBuffer(cfg.train.replay_buffer, np.random.default_rng(replay_seq[1])),
    )


def checkpoint_path(run_dir: Path, epoch: int) -> Path:
    return Path(run_dir) / "checkpoints" / f"epoch_{epoch:04d}.pt"


def save_checkpoint(state: TrainState, path: Path) -> Path:
    """Write atomically: a crash never leaves a truncated archive under ``path``."""
    path = Path(path)
    payload = {
        "format": CHECKPOINT_FORMAT,
        "run_config": state.config.to_dict(),
        "config_hash": state.config.config_hash(),
        "seed": state.config.seed,
        "epoch": state.epoch,
        "iteration": state.iteration,
        "networks": {name: net.state_dict() for name, net in state.networks().items()},
        "optimizers": {
            "generators": state.opt_g.state_dict(),
            "discriminators": state.opt_d.state_dict(),
        },
        "replay": {"vi": state.replay_vi.state_dict(), "ir": state.replay_ir.state_dict()},
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(payload, tmp)
        os.replace(tmp, path)
    except OSError as exc:
        tmp.unlink(missing_ok=True)
        raise CheckpointError(f"Could not write checkpoint {path}: {exc}") from exc
    logger.info(f"Saved checkpoint {path} (epoch {state.epoch}, iteration {state.iteration})")
    return path


def read_checkpoint(path: Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"Checkpoint {path} does not exist")
    try:
        # numpy bit-generator states are plain dicts of ints and strings
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as exc:
        raise CheckpointError(f"Checkpoint {path} is unreadable: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not an ir2vi checkpoint")
    return payload


def load_checkpoint(path: Path) -> TrainState:
    """Rebuild the full training state saved at ``path``."""
    payload = read_checkpoint(path)
    state = build_train_state(RunConfig.from_dict(payload["run_config"]))
    try:
        for name, net in state.networks().items():
            net.load_state_dict(payload["networks"][name])
        state.opt_g.load_state_dict(payload["optimizers"]["generators"])
        state.opt_d.load_state_dict(payload["optimizers"]["discriminators"])
        state.replay_vi.load_state_dict(payload["replay"]["vi"])
        state.replay_ir.load_state_dict(payload["replay"]["ir"])
    except (KeyError, RuntimeError) as exc:
        raise CheckpointError(f"Checkpoint {path} does not match its run config: {exc}") from exc
    state.epoch = int(payload["epoch"])
    state.iteration = int(payload["iteration"])
    return state


def load_generator(path: Path, which: str = "G") -> tuple[Generator, RunConfig]:
    """One mapping (``"G"``: IR->VI, ``"F"``: VI->IR) in eval mode, with its run config."""
    if which not in ("G", "F"):
        raise CheckpointError(f"which must be 'G' or 'F', got {which!r}")
    payload = read_checkpoint(path)
    cfg = RunConfig.from_dict(payload["run_config"])
    pair = build_mapping_pair(cfg.generator, cfg.seed)
    gen = getattr(pair, which)
    try:
        gen.load_state_dict(payload["networks"][which])
    except (KeyError, RuntimeError) as exc:
        raise CheckpointError(f"Checkpoint {path} has no usable {which} weights: {exc}") from exc
    return gen.eval(), cfg


def read_run_config(path: Path) -> RunConfig:
    """The run config a checkpoint was trained with."""
    return RunConfig.from_dict(read_checkpoint(path)["run_config"])
