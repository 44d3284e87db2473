import json
import tempfile
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from django.test import SimpleTestCase

from ir2vi.data.manifest import read_manifest
from ir2vi.data.synthetic import SceneSpec, scene_rng, synth_scene, write_synthetic_dataset
from ir2vi.data.types import BBox, Domain, GrayImage, ValueRange
from ir2vi.evaluation import (
    BlobDetector,
    BlobDetectorConfig,
    Detection,
    OracleDetector,
    average_precision,
    blob_detector,
    gradient_correlation,
    iou,
    load_report,
    match_detections,
)
from ir2vi.evaluation.plotting import plot_pr
from ir2vi.evaluation.runner import evaluate_translation
from ir2vi.exceptions import ConfigError, ContractError, ShapeError
from ir2vi.inference import translate_full_size
from ir2vi.run_config import load_run_config
from ir2vi.training.state import build_train_state, load_generator, save_checkpoint


def reference_ap(flags, n_gt: int) -> float:
    """Mean over ground truths of the best precision at or after their recall step."""
    flags = np.asarray(flags, dtype=bool)
    precision = np.cumsum(flags) / np.arange(1, flags.size + 1)
    hits = [precision[k:].max() for k in np.flatnonzero(flags)]
    return float(np.sum(hits) / n_gt)


def mask_iou(a: BBox, b: BBox) -> float:
    grid_a = np.zeros((40, 40), dtype=bool)
    grid_b = np.zeros((40, 40), dtype=bool)
    grid_a[a.y : a.y2, a.x : a.x2] = True
    grid_b[b.y : b.y2, b.x : b.x2] = True
    return (grid_a & grid_b).sum() / (grid_a | grid_b).sum()


def random_box(rng: np.random.Generator) -> BBox:
    w, h = (int(v) for v in rng.integers(1, 12, size=2))
    return BBox(int(rng.integers(0, 40 - w)), int(rng.integers(0, 40 - h)), w, h)


class MatchingTests(SimpleTestCase):
    def test_iou(self) -> None:
        self.assertAlmostEqual(iou(BBox(0, 0, 2, 2), BBox(1, 0, 2, 2)), 1 / 3)
        self.assertEqual(iou(BBox(0, 0, 2, 2), BBox(0, 0, 2, 2)), 1.0)
        self.assertEqual(iou(BBox(0, 0, 2, 2), BBox(2, 2, 2, 2)), 0.0)

    def test_duplicate_detection_is_a_false_positive(self) -> None:
        gt = {"a": (BBox(0, 0, 10, 10),)}
        one = [Detection(BBox(0, 0, 10, 10), 0.9, "a")]
        self.assertEqual([hit for _, hit in match_detections(one, gt)], [True])
        two = one + [Detection(BBox(1, 0, 10, 10), 0.8, "a")]
        self.assertEqual([hit for _, hit in match_detections(two, gt)], [True, False])

    def test_detections_only_match_their_own_image(self) -> None:
        gt = {"a": (BBox(0, 0, 10, 10),), "b": ()}
        flagged = match_detections([Detection(BBox(0, 0, 10, 10), 0.5, "b")], gt)
        self.assertEqual([hit for _, hit in flagged], [False])

    def test_greedy_matching_against_pixel_overlaps(self) -> None:
        rng = np.random.default_rng(0)
        for _ in range(200):
            gt = {img: tuple(random_box(rng) for _ in range(rng.integers(0, 4))) for img in "ab"}
            scores = rng.permutation(20)[: rng.integers(0, 8)] / 20
            dets = [Detection(random_box(rng), float(s), str(rng.choice(["a", "b"]))) for s in scores]

            taken = {img: set() for img in gt}
            expected = []
            for det in sorted(dets, key=lambda d: -d.score):
                overlaps = [
                    -1.0 if i in taken[det.image_id] else mask_iou(det.box, g)
                    for i, g in enumerate(gt[det.image_id])
                ]
                best = int(np.argmax(overlaps)) if overlaps else None
                hit = best is not None and overlaps[best] >= 0.5
                if hit:
                    taken[det.image_id].add(best)
                expected.append(hit)

            actual = [hit for _, hit in match_detections(dets, gt)]
            self.assertEqual(actual, expected)


class AveragePrecisionTests(SimpleTestCase):
    def test_worked_example(self) -> None:
        report = average_precision([True, False, True], n_gt=2)
        self.assertAlmostEqual(report.ap, 0.8333333333333333, places=12)
        self.assertEqual(report.curve.recalls.tolist(), [0.5, 0.5, 1.0])

    def test_against_reference(self) -> None:
        rng = np.random.default_rng(1)
        for _ in range(1000):
            flags = rng.random(int(rng.integers(1, 30))) < rng.random()
            n_gt = int(flags.sum() + rng.integers(0, 4))
            if n_gt == 0:
                continue
            self.assertAlmostEqual(
                average_precision(flags, n_gt).ap, reference_ap(flags, n_gt), places=9
            )

    def test_invariant_under_monotone_score_transform(self) -> None:
        rng = np.random.default_rng(2)
        gt = {"a": tuple(random_box(rng) for _ in range(4))}
        boxes = list(gt["a"]) + [random_box(rng) for _ in range(6)]
        scores = rng.permutation(10) / 10 + 0.05

        def ap(transform) -> float:
            dets = [Detection(b, float(transform(s)), "a") for b, s in zip(boxes, scores)]
            flags = match_detections(dets, gt)
            return average_precision([h for _, h in flags], 4, [d.score for d, _ in flags]).ap

        self.assertEqual(ap(lambda s: s), ap(lambda s: s**3))

    def test_tied_scores_form_one_cutoff(self) -> None:
        first = average_precision([True, False], n_gt=1, scores=[1.0, 1.0])
        second = average_precision([False, True], n_gt=1, scores=[1.0, 1.0])
        self.assertEqual(first.ap, 0.5)
        self.assertEqual(second.ap, 0.5)
        self.assertEqual(first.curve.points, ((1.0, 0.5),))
        mixed = average_precision([True, False, True, False], n_gt=3, scores=[0.9, 0.5, 0.5, 0.1])
        swapped = average_precision([True, True, False, False], n_gt=3, scores=[0.9, 0.5, 0.5, 0.1])
        self.assertEqual(mixed.ap, swapped.ap)
        self.assertEqual(mixed.curve.thresholds, (0.9, 0.5, 0.1))

    def test_scores_must_descend(self) -> None:
        with self.assertRaises(ContractError):
            average_precision([True, False], n_gt=1, scores=[0.2, 0.8])

    def test_no_ground_truth(self) -> None:
        self.assertEqual(average_precision([], n_gt=0).ap, 1.0)
        self.assertEqual(average_precision([False], n_gt=0).ap, 0.0)
        self.assertEqual(average_precision([], n_gt=3).ap, 0.0)

    def test_report_round_trip_and_bad_file(self) -> None:
        report = average_precision([True, False], n_gt=1, scores=[0.9, 0.4], n_images=1)
        again = type(report).from_json(json.loads(json.dumps(report.to_json())))
        self.assertEqual(again, report)
        with tempfile.TemporaryDirectory() as tmp:
            bad = Path(tmp) / "report.json"
            bad.write_text('{"ap": 1.0}')
            with self.assertRaises(ContractError):
                load_report(bad)

    def test_detection_scores_are_probabilities(self) -> None:
        with self.assertRaises(ContractError):
            Detection(BBox(0, 0, 1, 1), 1.5, "a")
        with self.assertRaises(ContractError):
            Detection(BBox(0, 0, 1, 1), float("nan"), "a")


class BlobDetectorTests(SimpleTestCase):
    def test_blank_image_has_no_detections(self) -> None:
        blank = GrayImage(np.full((64, 64), 128, dtype=np.uint8), ValueRange.UINT8)
        self.assertEqual(blob_detector(blank, BlobDetectorConfig()), [])

    def test_finds_textured_objects(self) -> None:
        spec = SceneSpec()
        detector = BlobDetector()
        n_gt = n_tp = 0
        for seed in range(100):
            sample = synth_scene(scene_rng(seed, Domain.VI, 0), Domain.VI, spec, f"vi_{seed}")
            flagged = match_detections(detector.detect(sample.image, sample.id), {sample.id: sample.boxes})
            n_gt += len(sample.boxes)
            n_tp += sum(hit for _, hit in flagged)
        self.assertGreaterEqual(n_tp / n_gt, 0.95)

    def test_three_targets_three_detections(self) -> None:
        spec = SceneSpec(height=96, width=96, min_objects=3, max_objects=3)
        detector = BlobDetector()
        for seed in range(10):
            sample = synth_scene(scene_rng(seed, Domain.VI, 0), Domain.VI, spec, "vi")
            detections = detector.detect(sample.image, sample.id)
            flagged = match_detections(detections, {sample.id: sample.boxes})
            self.assertEqual(len(detections), 3)
            self.assertEqual(sum(hit for _, hit in flagged), 3)

    def test_boxes_sit_on_object_edges(self) -> None:
        rng = np.random.default_rng(0)
        pixels = np.clip(128 + rng.normal(0, 2, size=(48, 48)), 0, 255)
        pixels[15:28, 20:33] = np.clip(128 + rng.normal(0, 40, size=(13, 13)), 0, 255)
        image = GrayImage(np.rint(pixels).astype(np.uint8), ValueRange.UINT8)
        (detection,) = blob_detector(image, BlobDetectorConfig())
        self.assertGreaterEqual(iou(detection.box, BBox(20, 15, 13, 13)), 0.7)

    def test_deterministic_and_sorted(self) -> None:
        sample = synth_scene(scene_rng(5, Domain.VI, 0), Domain.VI, SceneSpec(), "vi")
        first = blob_detector(sample.image, BlobDetectorConfig(), "vi")
        self.assertEqual(first, blob_detector(sample.image, BlobDetectorConfig(), "vi"))
        scores = [d.score for d in first]
        self.assertEqual(scores, sorted(scores, reverse=True))
        self.assertTrue(all(0.0 < s <= 1.0 for s in scores))

    def test_invalid_config(self) -> None:
        with self.assertRaises(ConfigError):
            BlobDetectorConfig(threshold=0.0)
        with self.assertRaises(ConfigError):
            BlobDetectorConfig(min_fill=1.5)
        with self.assertRaises(ConfigError):
            BlobDetectorConfig(edge_fraction=1.0)


class StructureTests(SimpleTestCase):
    def setUp(self) -> None:
        self.image = synth_scene(scene_rng(0, Domain.VI, 0), Domain.VI, SceneSpec(), "vi").image

    def test_inversion_keeps_structure(self) -> None:
        inverted = GrayImage(255 - self.image.pixels, ValueRange.UINT8)
        self.assertAlmostEqual(gradient_correlation(self.image, self.image), 1.0, places=9)
        self.assertAlmostEqual(gradient_correlation(self.image, inverted), 1.0, places=9)

    def test_flat_and_mismatched(self) -> None:
        flat = GrayImage(np.zeros((64, 64), dtype=np.uint8), ValueRange.UINT8)
        self.assertEqual(gradient_correlation(self.image, flat), 0.0)
        small = GrayImage(np.zeros((8, 8), dtype=np.uint8), ValueRange.UINT8)
        with self.assertRaises(ShapeError):
            gradient_correlation(self.image, small)


class EvaluateTranslationTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls) -> None:
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.root = Path(cls.tmp.name)
        cls.cfg = load_run_config("smoke")
        paths = write_synthetic_dataset(cls.cfg.scene, 4, seed=1, out_dir=cls.root / "data")
        cls.ir_path = paths[Domain.IR]
        cls.checkpoint = save_checkpoint(build_train_state(cls.cfg), cls.root / "init.pt")

    @classmethod
    def tearDownClass(cls) -> None:
        cls.tmp.cleanup()
        super().tearDownClass()

    def test_oracle_reaches_perfect_ap(self) -> None:
        manifest = read_manifest(self.ir_path)
        oracle = OracleDetector({e.id: e.boxes for e in manifest.entries})
        out_dir = self.root / "oracle"
        report = evaluate_translation(None, manifest, oracle, out_dir, raw=True)
        self.assertEqual(report.ap, 1.0)
        self.assertEqual(report.n_images, 4)
        self.assertEqual(report.metadata["mode"], "raw")
        self.assertEqual(load_report(out_dir / "report.json"), report)
        pr = pd.read_csv(out_dir / "pr.csv")
        self.assertEqual(list(pr.columns), ["threshold", "precision", "recall"])
        lines = (out_dir / "detections.jsonl").read_text().splitlines()
        self.assertEqual(len(lines), report.n_gt)
        self.assertIn("| raw |", (out_dir / "evaluate.log").read_text())

    def test_translated_mode(self) -> None:
        report = evaluate_translation(self.checkpoint, self.ir_path, BlobDetector(), self.root / "translated")
        self.assertGreaterEqual(report.ap, 0.0)
        self.assertLessEqual(report.ap, 1.0)
        self.assertEqual(report.metadata["config_hash"], self.cfg.config_hash())
        self.assertIn("structure_correlation", report.metadata)
        self.assertEqual(report.n_skipped, 0)

    def test_checkpoint_required_unless_raw(self) -> None:
        with self.assertRaises(ContractError):
            evaluate_translation(None, self.ir_path, BlobDetector(), self.root / "none")

    def test_full_size_translation_keeps_shape(self) -> None:
        gen, _ = load_generator(self.checkpoint)
        for shape in ((30, 37), (5, 3), (32, 32)):
            img = GrayImage(np.random.default_rng(0).integers(0, 256, shape, dtype=np.uint8), ValueRange.UINT8)
            out = translate_full_size(gen, img)
            self.assertEqual(out.shape, shape)
            self.assertIs(out.value_range, ValueRange.UINT8)


class PlotTests(SimpleTestCase):
    def test_one_curve_per_report(self) -> None:
        reports = [
            ("translated", average_precision([True, True, False], n_gt=2)),
            ("raw", average_precision([False, True], n_gt=2)),
        ]
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "pr.png"
            fig = plot_pr(reports, out)
            self.assertTrue(out.is_file())
        try:
            ax = fig.axes[0]
            self.assertEqual(len(ax.get_lines()), 2)
            labels = [t.get_text() for t in ax.get_legend().get_texts()]
            self.assertEqual(labels, ["translated (AP=1.000)", "raw (AP=0.250)"])
        finally:
            plt.close(fig)
