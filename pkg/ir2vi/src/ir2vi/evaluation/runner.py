"""Detection-proxy evaluation of a trained IR -> VI mapping.

Writes to ``out_dir``:

- ``detections.jsonl``  one ``{image_id, box, score}`` object per detection
- ``pr.csv``            ``threshold, precision, recall`` per score cutoff
- ``report.json``       ap, counts, curve, config hash and seed
- ``evaluate.log``      the log lines of this run
"""

import json
from dataclasses import replace
from pathlib import Path

from ir2vi.data.manifest import DatasetManifest, read_manifest
from ir2vi.data.preprocess import histogram_equalize, prepare_input
from ir2vi.data.types import BBox, GrayImage
from ir2vi.django_settings import IR2VI_IOU_THRESHOLD
from ir2vi.evaluation.detector import Detection, Detector
from ir2vi.evaluation.matching import match_detections
from ir2vi.evaluation.metrics import APReport, average_precision
from ir2vi.evaluation.structure import mean_structure_correlation
from ir2vi.exceptions import ContractError, IR2VIError
from ir2vi.inference import translate_full_size
from ir2vi.logging_config import logger, run_log, timed
from ir2vi.networks.generator import Generator
from ir2vi.training.state import load_generator


def _write_outputs(report: APReport, detections: list[Detection], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(d.to_json(), sort_keys=True) for d in detections]
    (out_dir / "detections.jsonl").write_text("".join(f"{line}\n" for line in lines))
    report.curve.to_frame().to_csv(out_dir / "pr.csv", index=False)
    (out_dir / "report.json").write_text(json.dumps(report.to_json(), indent=2, sort_keys=True))


def evaluate_translation(
    generator_checkpoint: Path | None,
    ir_manifest: DatasetManifest | Path,
    detector: Detector,
    out_dir: Path,
    iou_threshold: float = IR2VI_IOU_THRESHOLD,
    raw: bool = False,
    equalize: bool | None = None,
) -> APReport:
    """Translate every IR image full-size, detect, and score against the manifest boxes.

    With ``raw=True`` the detector runs on the (equalized) IR images directly and
    no checkpoint is needed. Images whose translation or detection fails are
    skipped and counted in ``n_skipped``.
    """
    manifest = ir_manifest if isinstance(ir_manifest, DatasetManifest) else read_manifest(Path(ir_manifest))
    out_dir = Path(out_dir)

    metadata: dict = {"mode": "raw" if raw else "translated", "iou_threshold": iou_threshold}
    gen, run = None, "raw"
    if not raw:
        if generator_checkpoint is None:
            raise ContractError("A generator checkpoint is required unless raw=True")
        gen, cfg = load_generator(Path(generator_checkpoint), "G")
        metadata |= {"config_hash": cfg.config_hash(), "seed": cfg.seed, "checkpoint": str(generator_checkpoint)}
        equalize = cfg.train.equalize_ir if equalize is None else equalize
        run = cfg.name
    equalize = True if equalize is None else equalize

    with run_log(out_dir, run, "evaluate.log"):
        return _evaluate(manifest, gen, detector, out_dir, iou_threshold, equalize, metadata)


def _evaluate(
    manifest: DatasetManifest,
    gen: Generator | None,
    detector: Detector,
    out_dir: Path,
    iou_threshold: float,
    equalize: bool,
    metadata: dict,
) -> APReport:
    detections: list[Detection] = []
    ground_truth: dict[str, tuple[BBox, ...]] = {}
    pairs: list[tuple[GrayImage, GrayImage]] = []
    skipped: list[str] = []
    with timed(f"evaluating {len(manifest)} images", level="INFO"):
        for index, entry in enumerate(manifest.entries):
            try:
                sample = manifest.load_sample(index)
                if gen is None:
                    image = histogram_equalize(sample.image) if equalize else sample.image
                else:
                    image = translate_full_size(gen, sample.image, equalize)
                    pairs.append((prepare_input(sample.image, equalize), image))
                found = detector.detect(image, sample.id)
            except (IR2VIError, RuntimeError, OSError) as exc:
                logger.warning(f"Skipping {entry.id}: {exc}")
                skipped.append(entry.id)
                continue
            ground_truth[sample.id] = sample.boxes
            detections.extend(found)

    flagged = match_detections(detections, ground_truth, iou_threshold)
    report = average_precision(
        [hit for _, hit in flagged],
        n_gt=sum(len(boxes) for boxes in ground_truth.values()),
        scores=[d.score for d, _ in flagged],
        n_images=len(ground_truth),
    )
    if pairs:
        metadata["structure_correlation"] = mean_structure_correlation(pairs)
    report = replace(report, n_skipped=len(skipped), metadata=metadata | {"skipped": skipped})

    _write_outputs(report, [d for d, _ in flagged], out_dir)
    logger.info(
        f"AP {report.ap:.4f} over {report.n_images} images ({report.n_gt} objects, "
        f"{report.n_detections} detections, {report.n_skipped} skipped) -> {out_dir}"
    )
    return report
