from pathlib import Path

from ir2vi.management.base import IR2VICommand
from ir2vi.training.runner import train


class Command(IR2VICommand):
    help = "Train the IR->VI / VI->IR mappings and their four critics."

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--ir-manifest", type=Path, default=None)
        parser.add_argument("--vi-manifest", type=Path, default=None)
        parser.add_argument("--out-dir", type=Path, default=None, help="Run directory")
        parser.add_argument("--resume", type=Path, default=None, help="Checkpoint to continue from")
        parser.add_argument("--seed", type=int, default=None)

    def run(self, **options):
        extra = {"train.seed": options["seed"]} if options["seed"] is not None else {}
        cfg = self.run_config(options, extra)
        ir_manifest = options["ir_manifest"] or cfg.data_root / "ir_manifest.jsonl"
        vi_manifest = options["vi_manifest"] or cfg.data_root / "vi_manifest.jsonl"

        final = train(cfg, ir_manifest, vi_manifest, options["out_dir"], options["resume"])
        self.stdout.write(str(final))
