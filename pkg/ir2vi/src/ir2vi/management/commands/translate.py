from pathlib import Path

from ir2vi.data.manifest import read_manifest
from ir2vi.data.types import Domain
from ir2vi.inference import translate_manifest
from ir2vi.management.base import IR2VICommand
from ir2vi.training.state import load_generator


class Command(IR2VICommand):
    help = "Translate every image of a manifest full-size with a trained mapping."
    uses_run_config = False

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--checkpoint", type=Path, required=True)
        parser.add_argument("--manifest", type=Path, required=True)
        parser.add_argument("--out-dir", type=Path, required=True)
        parser.add_argument(
            "--which", choices=("G", "F"), default="G", help="G: IR->VI (default), F: VI->IR"
        )
        parser.add_argument("--no-equalize", action="store_true")

    def run(self, **options):
        gen, cfg = load_generator(options["checkpoint"], options["which"])
        forward = options["which"] == "G"
        equalize = forward and cfg.train.equalize_ir and not options["no_equalize"]
        manifest = read_manifest(options["manifest"])

        result = translate_manifest(
            gen, manifest, options["out_dir"], equalize, Domain.VI if forward else Domain.IR
        )
        self.stdout.write(
            f"Translated {len(result)}/{len(manifest)} images -> {options['out_dir']}"
        )
