"""Full-size translation of stored images with a trained mapping."""

from pathlib import Path

import numpy as np

from ir2vi.data.manifest import DatasetManifest, ManifestEntry, write_manifest, write_png
from ir2vi.data.preprocess import denormalize, prepare_input
from ir2vi.data.types import Domain, GrayImage, ValueRange
from ir2vi.exceptions import IR2VIError
from ir2vi.logging_config import logger, timed
from ir2vi.networks.generator import Generator, translate


def _padding(n: int, min_size: int) -> int:
    target = max(n, min_size)
    return target + (-target) % 4 - n


def translate_full_size(gen: Generator, img: GrayImage, equalize: bool = True) -> GrayImage:
    """uint8 image of any size -> translated uint8 image of the same size.

    Sides that are not multiples of 4 are reflect-padded on the bottom and
    right edges, translated, and cropped back.
    """
    img.require(ValueRange.UINT8)
    source = prepare_input(img, equalize)
    h, w = source.shape
    pad_h, pad_w = _padding(h, gen.min_size), _padding(w, gen.min_size)
    pixels = source.pixels
    if pad_h or pad_w:
        mode = "reflect" if min(h, w) > 1 else "edge"
        pixels = np.pad(pixels, ((0, pad_h), (0, pad_w)), mode=mode)
    out = translate(gen, GrayImage(pixels, ValueRange.NORMALIZED), mode="eval")
    cropped = GrayImage(out.pixels[:h, :w], ValueRange.NORMALIZED)
    return denormalize(cropped)


def translate_manifest(
    gen: Generator,
    manifest: DatasetManifest,
    out_dir: Path,
    equalize: bool = True,
    domain: Domain = Domain.VI,
) -> DatasetManifest:
    """Translate every entry into ``out_dir``; boxes carry over unchanged.

    Returns (and writes as ``out_dir/manifest.jsonl``) the manifest of the
    translated images, tagged with the target ``domain``. Failing entries are
    logged and left out.
    """
    out_dir = Path(out_dir)
    entries = []
    with timed(f"translating {len(manifest)} images", level="INFO"):
        for index, entry in enumerate(manifest.entries):
            try:
                sample = manifest.load_sample(index)
                translated = translate_full_size(gen, sample.image, equalize)
            except IR2VIError as exc:
                logger.warning(f"Skipping {entry.id}: {exc}")
                continue
            write_png(translated, out_dir / entry.file)
            entries.append(ManifestEntry(entry.id, entry.file, domain, entry.boxes))
    result = DatasetManifest(out_dir, tuple(entries))
    write_manifest(result, out_dir / "manifest.jsonl")
    return result
