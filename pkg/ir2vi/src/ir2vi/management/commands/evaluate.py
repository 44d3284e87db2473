from pathlib import Path

from django.core.management.base import CommandError

from ir2vi.data.manifest import read_manifest
from ir2vi.django_settings import IR2VI_IOU_THRESHOLD
from ir2vi.evaluation.detector import BlobDetector, OracleDetector
from ir2vi.evaluation.runner import evaluate_translation
from ir2vi.exceptions import ConfigError
from ir2vi.management.base import IR2VICommand
from ir2vi.run_config import RunConfig, apply_overrides, load_run_config, parse_override
from ir2vi.training.state import read_run_config


class Command(IR2VICommand):
    help = "Detection-proxy evaluation: translate, detect, and report PR / AP."

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--checkpoint", type=Path, default=None)
        parser.add_argument("--manifest", type=Path, required=True, help="IR manifest")
        parser.add_argument("--out-dir", type=Path, required=True)
        parser.add_argument(
            "--raw", action="store_true", help="Detect on the IR images without translating"
        )
        parser.add_argument("--detector", choices=("blob", "oracle"), default="blob")
        parser.add_argument("--iou", type=float, default=IR2VI_IOU_THRESHOLD)

    def run(self, **options):
        if options["checkpoint"] is None and not options["raw"]:
            raise CommandError("--checkpoint is required unless --raw is given", returncode=2)
        cfg = self.evaluation_config(options)
        manifest = read_manifest(options["manifest"])

        if options["detector"] == "oracle":
            detector = OracleDetector({e.id: e.boxes for e in manifest.entries})
        else:
            detector = BlobDetector(cfg.detector)

        report = evaluate_translation(
            None if options["raw"] else options["checkpoint"],
            manifest,
            detector,
            options["out_dir"],
            iou_threshold=options["iou"],
            raw=options["raw"],
        )
        self.stdout.write(
            f"AP={report.ap:.4f} images={report.n_images} gt={report.n_gt} "
            f"skipped={report.n_skipped} -> {options['out_dir'] / 'report.json'}"
        )

    def evaluation_config(self, options: dict) -> RunConfig:
        """The checkpoint's run config, with the detector taken from the flags.

        Without a checkpoint the profile and overrides resolve as for every
        other command. With one, the mapping is fixed by the checkpoint, so
        only ``detector.*`` overrides and the detector of an explicit
        ``--config`` apply.
        """
        if options["checkpoint"] is None or options["raw"]:
            return self.run_config(options)
        overrides = dict(parse_override(text) for text in options["overrides"])
        fixed = sorted(key for key in overrides if not key.startswith("detector."))
        if fixed:
            raise ConfigError(f"Only detector settings can be overridden for a checkpoint, got {fixed}")
        payload = read_run_config(options["checkpoint"]).to_dict()
        if options["config"] is not None:
            payload["detector"] = load_run_config(options["config"]).to_dict()["detector"]
        return RunConfig.from_dict(apply_overrides(payload, overrides))
