"""PNG image I/O and the JSON-lines dataset manifest.

One manifest line per sample::

    {"id": "ir_000001", "file": "ir/ir_000001.png", "domain": "IR", "boxes": [[x, y, w, h], ...]}

``file`` is relative to the manifest's own directory (the manifest root).
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ir2vi.data.types import BBox, Domain, GrayImage, Sample, ValueRange
from ir2vi.exceptions import ContractError, ManifestError
from ir2vi.logging_config import logger


def read_png(path: Path) -> GrayImage:
    """Read an image as 8-bit grayscale."""
    with Image.open(path) as im:
        pixels = np.asarray(im.convert("L"), dtype=np.uint8).copy()
    return GrayImage(pixels, ValueRange.UINT8)


def write_png(img: GrayImage, path: Path) -> None:
    """Write an 8-bit single-channel PNG (bytes depend on pixels only)."""
    img.require(ValueRange.UINT8)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img.pixels).save(path, format="PNG")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    file: str
    domain: Domain
    boxes: tuple[BBox, ...]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "file": self.file,
            "domain": str(self.domain),
            "boxes": [b.to_list() for b in self.boxes],
        }


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    entries: tuple[ManifestEntry, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for entry in self.entries:
            if entry.id in seen:
                raise ManifestError(f"Duplicate manifest id {entry.id!r}")
            seen.add(entry.id)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def domains(self) -> set[Domain]:
        return {e.domain for e in self.entries}

    def path_of(self, entry: ManifestEntry) -> Path:
        return self.root / entry.file

    def load_sample(self, index: int) -> Sample:
        entry = self.entries[index]
        try:
            image = read_png(self.path_of(entry))
            return Sample(image=image, boxes=entry.boxes, domain=entry.domain, id=entry.id)
        except (OSError, ContractError) as exc:
            raise ManifestError(f"Cannot load sample {entry.id!r}: {exc}") from exc

    def n_boxes(self) -> int:
        return sum(len(e.boxes) for e in self.entries)


def _parse_line(line: str, lineno: int, path: Path) -> ManifestEntry:
    try:
        raw = json.loads(line)
        unknown = set(raw) - {"id", "file", "domain", "boxes"}
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)}")
        return ManifestEntry(
            id=str(raw["id"]),
            file=str(raw["file"]),
            domain=Domain(raw["domain"]),
            boxes=tuple(BBox.from_list(b) for b in raw["boxes"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"{path}:{lineno}: malformed manifest line ({exc})") from exc


def read_manifest(path: Path, check_files: bool = True) -> DatasetManifest:
    """Parse a JSON-lines manifest; every referenced file must exist."""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"Manifest not found: {path}")

    entries = [
        _parse_line(line, lineno, path)
        for lineno, line in enumerate(path.read_text().splitlines(), start=1)
        if line.strip()
    ]
    manifest = DatasetManifest(root=path.parent, entries=tuple(entries))

    if check_files:
        missing = [e.file for e in manifest.entries if not manifest.path_of(e).is_file()]
        if missing:
            raise ManifestError(
                f"{path}: {len(missing)} referenced file(s) missing, e.g. {missing[:3]}"
            )
    logger.info(f"Loaded manifest {path} with {len(manifest):,.0f} entries")
    return manifest


def write_manifest(manifest: DatasetManifest, path: Path) -> None:
    """Write one JSON object per line, in entry order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(e.to_json(), sort_keys=True) for e in manifest.entries]
    path.write_text("".join(f"{line}\n" for line in lines))
