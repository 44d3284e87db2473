"""Objective terms: cycle consistency, global adversarial, ROI cycle and ROI adversarial.

Expectations are means over the batch and over score-map cells. ROI terms
average over the boxes of each batch element, then over the batch.

The full generator objective is::

    total_G = adv(G, D_vi_global) + adv(F, D_ir_global) + lambda_cyc * L_cyc
            + lambda_roi * (lambda_cyc * L_roi_cyc + adv(G, D_vi_roi) + adv(F, D_ir_roi))

The nested ``lambda_cyc`` inside the ROI group is kept as published.
"""

import math
from dataclasses import asdict, dataclass, fields
from typing import Callable, Literal

import torch
import torch.nn.functional as F

from ir2vi.data.dataset import DomainBatch, TrainBatch
from ir2vi.data.types import Domain
from ir2vi.exceptions import ConfigError, DomainMismatchError, ShapeError
from ir2vi.hashing import payload_hash
from ir2vi.networks.sets import DiscriminatorSet, MappingPair
from ir2vi.roi import RoiPoolSpec, roi_pool_batch

AdversarialMode = Literal["log", "lsgan"]
Network = Callable[[torch.Tensor], torch.Tensor]

EPS = 1e-7
_LOG_MIN = math.log(EPS)
_LOG_MAX = math.log1p(-EPS)


@dataclass(frozen=True)
class LossWeights:
    lambda_cyc: float = 5.0
    lambda_roi: float = 0.1

    def __post_init__(self) -> None:
        if self.lambda_cyc < 0 or self.lambda_roi < 0:
            raise ConfigError(
                f"Loss weights must be >= 0, got lambda_cyc={self.lambda_cyc}, "
                f"lambda_roi={self.lambda_roi}"
            )

    def config_hash(self) -> str:
        return payload_hash(asdict(self))


@dataclass(frozen=True)
class LossReport:
    cyc: float
    adv_g_vi: float
    adv_g_ir: float
    roi_cyc: float
    roi_adv_vi: float
    roi_adv_ir: float
    total_g: float
    total_d: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_row(self) -> dict[str, float]:
        return asdict(self)


def combine_generator_terms(terms: dict, weights: LossWeights):
    """Weighted generator total; works on floats and on tensors alike."""
    roi_group = (
        weights.lambda_cyc * terms["roi_cyc"] + terms["roi_adv_vi"] + terms["roi_adv_ir"]
    )
    return (
        terms["adv_g_vi"]
        + terms["adv_g_ir"]
        + weights.lambda_cyc * terms["cyc"]
        + weights.lambda_roi * roi_group
    )


# ---- probability helpers ----


def clamped_log_sigmoid(logits: torch.Tensor) -> torch.Tensor:
    """``log(clamp(sigmoid(logits), EPS, 1 - EPS))`` computed in log space."""
    return F.logsigmoid(logits).clamp(min=_LOG_MIN, max=_LOG_MAX)


def _expectation(values: torch.Tensor, weights: torch.Tensor | None = None) -> torch.Tensor:
    if weights is None:
        return values.mean()
    per_item = values.flatten(start_dim=1).mean(dim=1)
    return (per_item * weights).sum()


def adversarial_value(
    real_logits: torch.Tensor,
    fake_logits: torch.Tensor,
    real_weights: torch.Tensor | None = None,
    fake_weights: torch.Tensor | None = None,
) -> torch.Tensor:
    """``E[log D(real)] + E[log(1 - D(fake))]``, the quantity the critic maximizes."""
    return _expectation(clamped_log_sigmoid(real_logits), real_weights) + _expectation(
        clamped_log_sigmoid(-fake_logits), fake_weights
    )


def critic_loss(
    real_logits: torch.Tensor,
    fake_logits: torch.Tensor,
    mode: AdversarialMode = "log",
    real_weights: torch.Tensor | None = None,
    fake_weights: torch.Tensor | None = None,
) -> torch.Tensor:
    if mode == "lsgan":
        return _expectation((real_logits - 1.0) ** 2, real_weights) + _expectation(
            fake_logits**2, fake_weights
        )
    return -adversarial_value(real_logits, fake_logits, real_weights, fake_weights)


def generator_adversarial_loss(
    fake_logits: torch.Tensor,
    mode: AdversarialMode = "log",
    weights: torch.Tensor | None = None,
) -> torch.Tensor:
    """Non-saturating ``-E[log D(fake)]`` (or ``E[(D(fake) - 1)^2]`` for lsgan)."""
    if mode == "lsgan":
        return _expectation((fake_logits - 1.0) ** 2, weights)
    return -_expectation(clamped_log_sigmoid(fake_logits), weights)


def _l1(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    return (a - b).abs().mean()


def _roi_l1(
    reconstruction: torch.Tensor, source: DomainBatch, spec: RoiPoolSpec
) -> torch.Tensor:
    rec_patches, weights = roi_pool_batch(reconstruction, source.boxes, spec)
    src_patches, _ = roi_pool_batch(source.images, source.boxes, spec)
    return _expectation((rec_patches - src_patches).abs(), weights)


# ---- single terms, network level ----


def cycle_loss(G: Network, F_: Network, x: DomainBatch, y: DomainBatch) -> torch.Tensor:
    """Mean-L1 of ``F(G(x)) - x`` plus mean-L1 of ``G(F(y)) - y``."""
    x, y = x.expect(Domain.IR), y.expect(Domain.VI)
    return _l1(F_(G(x.images)), x.images) + _l1(G(F_(y.images)), y.images)


def adversarial_loss_d(
    D: Network, real: torch.Tensor, fake: torch.Tensor, mode: AdversarialMode = "log"
) -> torch.Tensor:
    """Critic loss on real images vs fakes (detached here)."""
    if real.shape != fake.shape:
        raise ShapeError(
            f"real and fake batches differ: {tuple(real.shape)} vs {tuple(fake.shape)}"
        )
    return critic_loss(D(real), D(fake.detach()), mode)


def adversarial_loss_g(D: Network, fake: torch.Tensor, mode: AdversarialMode = "log") -> torch.Tensor:
    return generator_adversarial_loss(D(fake), mode)


def roi_cycle_loss(
    G: Network, F_: Network, x: DomainBatch, y: DomainBatch, spec: RoiPoolSpec
) -> torch.Tensor:
    """Mean-L1 between ``R(F(G(x)))`` and ``R(x)`` plus the symmetric VI term."""
    x, y = x.expect(Domain.IR), y.expect(Domain.VI)
    return _roi_l1(F_(G(x.images)), x, spec) + _roi_l1(G(F_(y.images)), y, spec)


def _check_roi_pair(real: DomainBatch, fake: DomainBatch) -> None:
    if real.domain is not fake.domain:
        raise DomainMismatchError(
            f"ROI critic got real {real.domain} and fake {fake.domain} patches"
        )


def roi_adversarial_loss_d(
    D_roi: Network,
    real: DomainBatch,
    fake: DomainBatch,
    spec: RoiPoolSpec,
    mode: AdversarialMode = "log",
) -> torch.Tensor:
    """Critic loss over pooled patches; ``fake`` carries the source element's boxes."""
    _check_roi_pair(real, fake)
    real_patches, real_w = roi_pool_batch(real.images, real.boxes, spec)
    fake_patches, fake_w = roi_pool_batch(fake.images.detach(), fake.boxes, spec)
    return critic_loss(D_roi(real_patches), D_roi(fake_patches), mode, real_w, fake_w)


def roi_adversarial_loss_g(
    D_roi: Network, fake: DomainBatch, spec: RoiPoolSpec, mode: AdversarialMode = "log"
) -> torch.Tensor:
    patches, weights = roi_pool_batch(fake.images, fake.boxes, spec)
    return generator_adversarial_loss(D_roi(patches), mode, weights)


# ---- full objective ----


@dataclass
class Translations:
    """Every image the generators produce for one batch."""

    fake_vi: DomainBatch  # G(x), with x's boxes
    fake_ir: DomainBatch  # F(y), with y's boxes
    rec_ir: torch.Tensor  # F(G(x))
    rec_vi: torch.Tensor  # G(F(y))


def translate_batch(pair: MappingPair, batch: TrainBatch) -> Translations:
    x, y = batch.x.expect(Domain.IR), batch.y.expect(Domain.VI)
    fake_vi = pair.G(x.images)
    fake_ir = pair.F(y.images)
    return Translations(
        fake_vi=DomainBatch(fake_vi, x.boxes, Domain.VI, x.ids),
        fake_ir=DomainBatch(fake_ir, y.boxes, Domain.IR, y.ids),
        rec_ir=pair.F(fake_vi),
        rec_vi=pair.G(fake_ir),
    )


def generator_terms(
    discs: DiscriminatorSet,
    batch: TrainBatch,
    fakes: Translations,
    spec: RoiPoolSpec,
    mode: AdversarialMode = "log",
) -> dict[str, torch.Tensor]:
    x, y = batch.x, batch.y
    return {
        "cyc": _l1(fakes.rec_ir, x.images) + _l1(fakes.rec_vi, y.images),
        "adv_g_vi": adversarial_loss_g(discs.vi_global, fakes.fake_vi.images, mode),
        "adv_g_ir": adversarial_loss_g(discs.ir_global, fakes.fake_ir.images, mode),
        "roi_cyc": _roi_l1(fakes.rec_ir, x, spec) + _roi_l1(fakes.rec_vi, y, spec),
        "roi_adv_vi": roi_adversarial_loss_g(discs.vi_roi, fakes.fake_vi, spec, mode),
        "roi_adv_ir": roi_adversarial_loss_g(discs.ir_roi, fakes.fake_ir, spec, mode),
    }


def discriminator_terms(
    discs: DiscriminatorSet,
    batch: TrainBatch,
    fakes: Translations,
    spec: RoiPoolSpec,
    mode: AdversarialMode = "log",
    global_fake_vi: torch.Tensor | None = None,
    global_fake_ir: torch.Tensor | None = None,
) -> dict[str, torch.Tensor]:
    """The four critic losses. Global critics may be fed replayed fakes instead of current ones."""
    fake_vi = fakes.fake_vi.images if global_fake_vi is None else global_fake_vi
    fake_ir = fakes.fake_ir.images if global_fake_ir is None else global_fake_ir
    return {
        "d_vi_global": adversarial_loss_d(discs.vi_global, batch.y.images, fake_vi, mode),
        "d_ir_global": adversarial_loss_d(discs.ir_global, batch.x.images, fake_ir, mode),
        "d_vi_roi": roi_adversarial_loss_d(discs.vi_roi, batch.y, fakes.fake_vi, spec, mode),
        "d_ir_roi": roi_adversarial_loss_d(discs.ir_roi, batch.x, fakes.fake_ir, spec, mode),
    }


def full_objective(
    pair: MappingPair,
    discs: DiscriminatorSet,
    batch: TrainBatch,
    weights: LossWeights,
    spec: RoiPoolSpec,
    mode: AdversarialMode = "log",
) -> LossReport:
    """Evaluate every term on one batch (no parameter updates)."""
    with torch.no_grad():
        fakes = translate_batch(pair, batch)
        g_terms = generator_terms(discs, batch, fakes, spec, mode)
        d_terms = discriminator_terms(discs, batch, fakes, spec, mode)
    values = {k: float(v) for k, v in g_terms.items()}
    return LossReport(
        **values,
        total_g=float(combine_generator_terms(values, weights)),
        total_d=float(sum(d_terms.values())),
    )
