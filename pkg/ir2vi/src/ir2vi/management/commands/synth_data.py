from pathlib import Path

from ir2vi.data.synthetic import write_synthetic_dataset
from ir2vi.management.base import IR2VICommand


class Command(IR2VICommand):
    help = "Generate synthetic IR and VI scenes with box annotations and their manifests."

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--count", type=int, default=None, help="Scenes per domain")
        parser.add_argument("--seed", type=int, default=None, help="Root seed")
        parser.add_argument("--out-dir", type=Path, default=None)

    def run(self, **options):
        extra = {"data.count": options["count"]} if options["count"] is not None else {}
        if options["seed"] is not None:
            extra["train.seed"] = options["seed"]
        cfg = self.run_config(options, extra)
        out_dir = options["out_dir"] or cfg.data_root

        manifests = write_synthetic_dataset(cfg.scene, cfg.data.count, cfg.seed, out_dir)
        for domain, path in manifests.items():
            self.stdout.write(f"{domain}: {cfg.data.count} samples -> {path}")
