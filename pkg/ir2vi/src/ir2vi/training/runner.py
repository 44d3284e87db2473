"""Alternating min-max optimization of the six networks.

Per batch: one joint G/F step with every critic frozen, then one step of the
four critics on detached fakes. The global critics see fakes drawn through
the replay buffers; the ROI critics see the current batch's fakes.
"""

import json
import math
from pathlib import Path

import pandas as pd
import torch

from ir2vi.data.dataset import TrainBatch, UnpairedDataset, make_loader
from ir2vi.data.manifest import DatasetManifest, read_manifest
from ir2vi.exceptions import ConfigError, NonFiniteLossError
from ir2vi.logging_config import logger, run_log, timed
from ir2vi.losses import (
    LossReport,
    combine_generator_terms,
    discriminator_terms,
    generator_terms,
    translate_batch,
)
from ir2vi.run_config import RunConfig
from ir2vi.training.metrics import MetricsLog
from ir2vi.training.schedule import lr_at
from ir2vi.training.state import (
    TrainState,
    build_train_state,
    checkpoint_path,
    load_checkpoint,
    save_checkpoint,
)


def _set_requires_grad(nets, flag: bool) -> None:
    for net in nets:
        for param in net.parameters():
            param.requires_grad_(flag)


def _check_finite(terms: dict[str, torch.Tensor], iteration: int) -> None:
    for name, value in terms.items():
        scalar = float(value.detach())
        if not math.isfinite(scalar):
            raise NonFiniteLossError(name, scalar, iteration)


def train_step(state: TrainState, batch: TrainBatch) -> LossReport:
    """Advance ``state`` by one G/F step and one critic step; returns the losses of this batch."""
    cfg = state.config
    spec, mode, weights = cfg.roi, cfg.train.adversarial_mode, cfg.train.weights
    critics = list(state.discs.named().values())
    for net in state.networks().values():
        net.train()

    # ---- generator step ----
    _set_requires_grad(critics, False)
    try:
        fakes = translate_batch(state.pair, batch)
        g_terms = generator_terms(state.discs, batch, fakes, spec, mode)
        total_g = combine_generator_terms(g_terms, weights)
        _check_finite({**g_terms, "total_g": total_g}, state.iteration)
        state.opt_g.zero_grad(set_to_none=True)
        total_g.backward()
        state.opt_g.step()
    finally:
        _set_requires_grad(critics, True)

    # ---- critic step ----
    history_vi = state.replay_vi.query(fakes.fake_vi.images)
    history_ir = state.replay_ir.query(fakes.fake_ir.images)
    d_terms = discriminator_terms(state.discs, batch, fakes, spec, mode, history_vi, history_ir)
    total_d = sum(d_terms.values())
    _check_finite({**d_terms, "total_d": total_d}, state.iteration)
    state.opt_d.zero_grad(set_to_none=True)
    total_d.backward()
    state.opt_d.step()

    state.iteration += 1
    return LossReport(
        **{name: float(value.detach()) for name, value in g_terms.items()},
        total_g=float(total_g.detach()),
        total_d=float(total_d.detach()),
    )


def _as_manifest(manifest: DatasetManifest | Path) -> DatasetManifest:
    return manifest if isinstance(manifest, DatasetManifest) else read_manifest(Path(manifest))


def _write_run_config(cfg: RunConfig, run_dir: Path) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    payload = {"config_hash": cfg.config_hash(), "seed": cfg.seed, "config": cfg.to_dict()}
    (run_dir / "run_config.json").write_text(json.dumps(payload, indent=2, sort_keys=True))


def train(
    cfg: RunConfig,
    ir_manifest: DatasetManifest | Path,
    vi_manifest: DatasetManifest | Path,
    out_dir: Path | None = None,
    resume: Path | None = None,
) -> Path:
    """Run (or finish) the full schedule and return the final checkpoint path.

    Parameters
    ----------
    cfg : RunConfig
        Validated run configuration.
    ir_manifest, vi_manifest : DatasetManifest or Path
        Unpaired training sets.
    out_dir : Path, optional
        Run directory; defaults to ``cfg.run_dir``. Holds ``run_config.json``, ``train.log``,
        ``metrics.csv`` and ``checkpoints/``.
    resume : Path, optional
        Checkpoint to continue from. Its run config must hash like ``cfg``.

    Returns
    -------
    Path
    """
    torch.use_deterministic_algorithms(True, warn_only=True)
    run_dir = Path(out_dir) if out_dir is not None else cfg.run_dir
    with run_log(run_dir, cfg.name, "train.log"):
        return _run_schedule(cfg, ir_manifest, vi_manifest, run_dir, resume)


def _run_schedule(
    cfg: RunConfig,
    ir_manifest: DatasetManifest | Path,
    vi_manifest: DatasetManifest | Path,
    run_dir: Path,
    resume: Path | None,
) -> Path:
    total = cfg.train.total_epochs
    if resume is not None:
        state = load_checkpoint(resume)
        if state.config.config_hash() != cfg.config_hash():
            raise ConfigError(
                f"Checkpoint {resume} was trained with config {state.config.config_hash()}, "
                f"not {cfg.config_hash()}"
            )
        logger.info(f"Resuming from {resume} at epoch {state.epoch}, iteration {state.iteration}")
    else:
        state = build_train_state(cfg)

    _write_run_config(cfg, run_dir)
    metrics = MetricsLog(run_dir / "metrics.csv")
    if resume is not None:
        metrics.truncate(state.iteration)
    else:
        metrics.path.unlink(missing_ok=True)

    if total == 0:
        return save_checkpoint(state, checkpoint_path(run_dir, 0))

    dataset = UnpairedDataset(
        _as_manifest(ir_manifest),
        _as_manifest(vi_manifest),
        crop_size=cfg.train.crop_size,
        seed=cfg.seed,
        equalize_ir=cfg.train.equalize_ir,
    )
    loader = make_loader(dataset, cfg.train.batch_size, cfg.train.num_workers)
    logger.info(
        f"Training {cfg.name} ({cfg.config_hash()}): {total} epochs x {len(loader)} iterations, "
        f"seed {cfg.seed}"
    )

    last = None
    for epoch in range(state.epoch, total):
        lr = lr_at(epoch, cfg.train)
        state.set_lr(lr)
        dataset.set_epoch(epoch)
        reports = []
        try:
            with timed(f"epoch {epoch}") as clock:
                for batch in loader:
                    report = train_step(state, batch)
                    reports.append(report.as_row())
                    metrics.append(state.iteration, epoch, report)
                    logger.debug(
                        f"it {state.iteration}: total_g={report.total_g:.4f} "
                        f"total_d={report.total_d:.4f}"
                    )
        finally:
            metrics.flush()

        state.epoch = epoch + 1
        means = pd.DataFrame(reports).mean()
        logger.info(
            f"epoch {state.epoch}/{total} lr={lr:.2e} total_g={means['total_g']:.4f} "
            f"total_d={means['total_d']:.4f} cyc={means['cyc']:.4f} roi_cyc={means['roi_cyc']:.4f} "
            f"({clock.elapsed:.1f}s)"
        )
        if state.epoch % cfg.train.checkpoint_every == 0 or state.epoch == total:
            last = save_checkpoint(state, checkpoint_path(run_dir, state.epoch))

    if last is None:
        # resumed from a checkpoint that already finished the schedule
        last = checkpoint_path(run_dir, state.epoch)
        if not last.exists():
            last = save_checkpoint(state, last)
    return last
