"""Image I/O, preprocessing, manifests, cropping and synthetic scenes."""

from ir2vi.data.cropping import crop_with_object
from ir2vi.data.dataset import DomainBatch, TrainBatch, UnpairedDataset, make_loader
from ir2vi.data.manifest import (
    DatasetManifest,
    ManifestEntry,
    read_manifest,
    read_png,
    write_manifest,
    write_png,
)
from ir2vi.data.preprocess import denormalize, histogram_equalize, normalize
from ir2vi.data.synthetic import SceneSpec, synth_scene
from ir2vi.data.types import BBox, Domain, GrayImage, Sample, ValueRange

__all__ = [
    "BBox",
    "DatasetManifest",
    "Domain",
    "DomainBatch",
    "GrayImage",
    "ManifestEntry",
    "Sample",
    "SceneSpec",
    "TrainBatch",
    "UnpairedDataset",
    "ValueRange",
    "crop_with_object",
    "denormalize",
    "histogram_equalize",
    "make_loader",
    "normalize",
    "read_manifest",
    "read_png",
    "synth_scene",
    "write_manifest",
    "write_png",
]
