"""Unpaired IR / VI training stream as a torch ``Dataset``.

IR and VI are shuffled independently each epoch; no pairing is ever assumed.
Every random draw (shuffle order, crop window) is derived from
``(seed, epoch, index)``, so the batch sequence is identical whatever the
number of loader workers.
"""

from dataclasses import dataclass, replace

import numpy as np
import torch
from torch.utils.data import DataLoader, Dataset

from ir2vi.data.cropping import crop_with_object
from ir2vi.data.manifest import DatasetManifest
from ir2vi.data.preprocess import histogram_equalize, normalize, to_tensor
from ir2vi.data.types import BBox, Domain
from ir2vi.exceptions import DomainMismatchError, ManifestError


@dataclass
class DomainBatch:
    """``(B, 1, H, W)`` images of one domain with per-element boxes."""

    images: torch.Tensor
    boxes: tuple[tuple[BBox, ...], ...]
    domain: Domain
    ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.images.ndim != 4:
            raise ValueError(f"DomainBatch images must be (B, C, H, W), got {tuple(self.images.shape)}")
        if len(self.boxes) != self.images.shape[0]:
            raise ValueError(
                f"DomainBatch has {self.images.shape[0]} images but {len(self.boxes)} box lists"
            )

    def __len__(self) -> int:
        return int(self.images.shape[0])

    def expect(self, domain: Domain) -> "DomainBatch":
        if self.domain is not domain:
            raise DomainMismatchError(f"expected a {domain} batch, got a {self.domain} batch")
        return self

    def to(self, *args, **kwargs) -> "DomainBatch":
        return DomainBatch(self.images.to(*args, **kwargs), self.boxes, self.domain, self.ids)


@dataclass
class TrainBatch:
    x: DomainBatch  # IR
    y: DomainBatch  # VI

    def to(self, *args, **kwargs) -> "TrainBatch":
        return TrainBatch(self.x.to(*args, **kwargs), self.y.to(*args, **kwargs))


def _domain_code(domain: Domain) -> int:
    return 0 if domain is Domain.IR else 1


class UnpairedDataset(Dataset):
    def __init__(
        self,
        ir_manifest: DatasetManifest,
        vi_manifest: DatasetManifest,
        crop_size: int,
        seed: int,
        equalize_ir: bool = True,
    ) -> None:
        if not len(ir_manifest) or not len(vi_manifest):
            raise ManifestError("Both the IR and the VI manifest need at least one entry")
        for manifest, domain in ((ir_manifest, Domain.IR), (vi_manifest, Domain.VI)):
            if manifest.domains != {domain}:
                raise DomainMismatchError(
                    f"{domain} manifest holds domains {sorted(manifest.domains)}"
                )
        self.manifests = {Domain.IR: ir_manifest, Domain.VI: vi_manifest}
        self.crop_size = crop_size
        self.seed = seed
        self.equalize_ir = equalize_ir
        self.set_epoch(0)

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch
        self._order = {
            domain: np.random.default_rng([self.seed, epoch, _domain_code(domain)]).permutation(
                len(manifest)
            )
            for domain, manifest in self.manifests.items()
        }

    def __len__(self) -> int:
        return max(len(m) for m in self.manifests.values())

    def _item(self, domain: Domain, index: int) -> tuple[torch.Tensor, tuple[BBox, ...], str]:
        order = self._order[domain]
        sample = self.manifests[domain].load_sample(int(order[index % len(order)]))
        rng = np.random.default_rng([self.seed, self.epoch, _domain_code(domain), index, 1])
        if self.equalize_ir and domain is Domain.IR:
            # whole image, as translation and evaluation see it
            sample = replace(sample, image=histogram_equalize(sample.image))
        sample = crop_with_object(sample, self.crop_size, rng)
        return to_tensor(normalize(sample.image)), sample.boxes, sample.id

    def __getitem__(self, index: int) -> dict:
        return {domain: self._item(domain, index) for domain in (Domain.IR, Domain.VI)}


def collate_unpaired(items: list[dict]) -> TrainBatch:
    def stack(domain: Domain) -> DomainBatch:
        images, boxes, ids = zip(*(item[domain] for item in items))
        return DomainBatch(torch.stack(images), tuple(boxes), domain, tuple(ids))

    return TrainBatch(x=stack(Domain.IR), y=stack(Domain.VI))


def make_loader(dataset: UnpairedDataset, batch_size: int, num_workers: int = 0) -> DataLoader:
    """Sequential loader; shuffling already happened in ``set_epoch``."""
    return DataLoader(
        dataset,
        batch_size=batch_size,
        shuffle=False,
        drop_last=False,
        num_workers=num_workers,
        collate_fn=collate_unpaired,
    )
