"""``ir2vi`` console entry point.

Thin wrapper over the django management commands so that the documented
hyphenated subcommands work::

    ir2vi synth-data --profile toy
    ir2vi train --profile toy
    ir2vi translate --checkpoint ... --manifest ... --out-dir ...
    ir2vi evaluate --checkpoint ... --manifest ... --out-dir ...
    ir2vi plot-pr runs/a/report.json runs/b/report.json --out pr.png
"""

import os
import sys

SUBCOMMANDS = ("synth-data", "train", "translate", "evaluate", "plot-pr")


def main(argv: list[str] | None = None) -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "ir2vi.django_settings")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1 and argv[1] in SUBCOMMANDS:
        argv[1] = argv[1].replace("-", "_")
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
