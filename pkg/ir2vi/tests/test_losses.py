import math

import torch
from django.test import SimpleTestCase

from ir2vi.data.dataset import DomainBatch
from ir2vi.data.types import Domain
from ir2vi.exceptions import ConfigError, DomainMismatchError, ShapeError
from ir2vi.losses import (
    EPS,
    LossReport,
    LossWeights,
    adversarial_loss_d,
    adversarial_loss_g,
    adversarial_value,
    clamped_log_sigmoid,
    combine_generator_terms,
    critic_loss,
    cycle_loss,
    full_objective,
    generator_terms,
    roi_adversarial_loss_d,
    roi_adversarial_loss_g,
    roi_cycle_loss,
    translate_batch,
)

from tests.helpers import MICRO_ROI, gradient_agreement, micro_networks, random_batch

HALF = 2 * math.log(0.5)


def identity(t: torch.Tensor) -> torch.Tensor:
    return t


def undecided(t: torch.Tensor) -> torch.Tensor:
    """A critic with D == 0.5 everywhere."""
    return t.new_zeros(t.shape[0], 1, 2, 2)


def as_fake(batch: DomainBatch, domain: Domain) -> DomainBatch:
    return DomainBatch(batch.images, batch.boxes, domain, batch.ids)


class AnalyticValueTests(SimpleTestCase):
    def setUp(self) -> None:
        self.batch = random_batch(seed=0)

    def test_undecided_critic_gives_two_log_half(self) -> None:
        real, fake = self.batch.y.images, self.batch.x.images
        value = adversarial_value(undecided(real), undecided(fake))
        self.assertAlmostEqual(float(value), HALF, delta=1e-9)
        self.assertAlmostEqual(float(adversarial_loss_d(undecided, real, fake)), -HALF, delta=1e-9)

    def test_undecided_roi_critic_gives_two_log_half(self) -> None:
        fake_vi = as_fake(self.batch.x, Domain.VI)
        loss = roi_adversarial_loss_d(undecided, self.batch.y, fake_vi, MICRO_ROI)
        self.assertAlmostEqual(float(loss), -HALF, delta=1e-9)
        self.assertAlmostEqual(
            float(roi_adversarial_loss_g(undecided, fake_vi, MICRO_ROI)), math.log(2), delta=1e-9
        )

    def test_identity_mappings_have_zero_cycle_losses(self) -> None:
        x, y = self.batch.x, self.batch.y
        self.assertEqual(float(cycle_loss(identity, identity, x, y)), 0.0)
        self.assertEqual(float(roi_cycle_loss(identity, identity, x, y, MICRO_ROI)), 0.0)

    def test_log_probabilities_are_clamped(self) -> None:
        logits = torch.tensor([-1e4, 0.0, 1e4], dtype=torch.float64)
        out = clamped_log_sigmoid(logits)
        self.assertAlmostEqual(float(out[0]), math.log(EPS), places=12)
        self.assertAlmostEqual(float(out[2]), math.log1p(-EPS), places=12)
        self.assertTrue(bool(torch.isfinite(critic_loss(logits, -logits)).all()))

    def test_least_squares_variant(self) -> None:
        zeros = torch.zeros(2, 1, 2, 2)
        self.assertAlmostEqual(float(critic_loss(zeros, zeros, mode="lsgan")), 1.0)
        self.assertAlmostEqual(float(adversarial_loss_g(undecided, zeros, mode="lsgan")), 1.0)

    def test_contract_errors(self) -> None:
        x, y = self.batch.x, self.batch.y
        with self.assertRaises(DomainMismatchError):
            cycle_loss(identity, identity, y, x)
        with self.assertRaises(DomainMismatchError):
            roi_adversarial_loss_d(undecided, y, x, MICRO_ROI)
        with self.assertRaises(ShapeError):
            adversarial_loss_d(undecided, x.images, x.images[:1])
        with self.assertRaises(ConfigError):
            LossWeights(lambda_roi=-1.0)


class ObjectiveTests(SimpleTestCase):
    def test_zero_roi_weight_cuts_roi_critic_gradients(self) -> None:
        pair, discs = micro_networks()
        batch = random_batch(seed=1)
        fakes = translate_batch(pair, batch)
        terms = generator_terms(discs, batch, fakes, MICRO_ROI)
        total = combine_generator_terms(terms, LossWeights(lambda_roi=0.0))
        roi_params = [p for d in discs.roi() for p in d.parameters()]
        grads = torch.autograd.grad(total, roi_params, allow_unused=True)
        for grad in grads:
            self.assertTrue(grad is None or bool((grad == 0).all()))

    def test_full_objective_report_is_consistent(self) -> None:
        pair, discs = micro_networks()
        weights = LossWeights()
        report = full_objective(pair, discs, random_batch(seed=2), weights, MICRO_ROI)
        self.assertEqual(len(LossReport.columns()), 8)
        row = report.as_row()
        self.assertAlmostEqual(report.total_g, combine_generator_terms(row, weights), places=9)
        for value in row.values():
            self.assertTrue(math.isfinite(value))
        self.assertGreater(report.total_d, 0.0)


class GradientCheckTests(SimpleTestCase):
    """Autograd vs central differences over every generator parameter (float64)."""

    def setUp(self) -> None:
        self.pair, self.discs = micro_networks(seed=4)
        self.batch = random_batch(seed=4)
        self.params = list(self.pair.G.parameters()) + list(self.pair.F.parameters())

    def assertGradientsAgree(self, loss_fn) -> None:
        self.assertGreaterEqual(gradient_agreement(loss_fn, self.params), 0.99)

    def test_cycle_loss(self) -> None:
        self.assertGradientsAgree(
            lambda: cycle_loss(self.pair.G, self.pair.F, self.batch.x, self.batch.y)
        )

    def test_global_adversarial_loss(self) -> None:
        def loss():
            fakes = translate_batch(self.pair, self.batch)
            return adversarial_loss_g(self.discs.vi_global, fakes.fake_vi.images) + adversarial_loss_g(
                self.discs.ir_global, fakes.fake_ir.images
            )

        self.assertGradientsAgree(loss)

    def test_roi_cycle_loss(self) -> None:
        self.assertGradientsAgree(
            lambda: roi_cycle_loss(self.pair.G, self.pair.F, self.batch.x, self.batch.y, MICRO_ROI)
        )

    def test_roi_adversarial_loss(self) -> None:
        def loss():
            fakes = translate_batch(self.pair, self.batch)
            return roi_adversarial_loss_g(self.discs.vi_roi, fakes.fake_vi, MICRO_ROI) + roi_adversarial_loss_g(
                self.discs.ir_roi, fakes.fake_ir, MICRO_ROI
            )

        self.assertGradientsAgree(loss)

    def test_full_generator_objective(self) -> None:
        weights = LossWeights(lambda_cyc=5.0, lambda_roi=0.1)

        def loss():
            fakes = translate_batch(self.pair, self.batch)
            return combine_generator_terms(
                generator_terms(self.discs, self.batch, fakes, MICRO_ROI), weights
            )

        self.assertGradientsAgree(loss)
