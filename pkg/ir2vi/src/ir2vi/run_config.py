"""The merged, validated configuration of one run.

A run config is a registered profile or a JSON file with the same shape,
then dotted-key overrides (``train.lr=1e-4``) on top. Unknown keys are
rejected at every nesting level before any work starts.
"""

import copy
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from ir2vi.data.synthetic import SceneSpec
from ir2vi.django_settings import IR2VI_CROP_SIZE, IR2VI_OUTPUT_ROOT
from ir2vi.evaluation.detector import BlobDetectorConfig
from ir2vi.exceptions import ConfigError
from ir2vi.hashing import payload_hash
from ir2vi.losses import LossWeights
from ir2vi.networks.config import DiscriminatorConfig, GeneratorConfig
from ir2vi.networks.discriminator import min_input_size
from ir2vi.roi import RoiPoolSpec
from ir2vi.training.config import TrainConfig

SECTIONS = ("scene", "generator", "discriminator", "roi", "train", "detector", "data")


@dataclass(frozen=True)
class DataConfig:
    """Where data lives and how much synthetic data to generate.

    Empty paths resolve below ``IR2VI_OUTPUT_ROOT/<run name>``.
    """

    root: str = ""
    run_dir: str = ""
    count: int = 200

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ConfigError(f"data.count must be >= 0, got {self.count}")


@dataclass(frozen=True)
class RunConfig:
    name: str = "published"
    # Scenes default to the crop size so synthetic data always fits the crop
    scene: SceneSpec = field(
        default_factory=lambda: SceneSpec(height=IR2VI_CROP_SIZE, width=IR2VI_CROP_SIZE)
    )
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    discriminator: DiscriminatorConfig = field(default_factory=DiscriminatorConfig)
    roi: RoiPoolSpec = field(default_factory=RoiPoolSpec)
    train: TrainConfig = field(default_factory=TrainConfig)
    detector: BlobDetectorConfig = field(default_factory=BlobDetectorConfig)
    data: DataConfig = field(default_factory=DataConfig)

    def __post_init__(self) -> None:
        norms = {self.train.norm, self.generator.norm, self.discriminator.norm}
        if len(norms) > 1:
            raise ConfigError(
                f"train, generator and discriminator disagree on norm: "
                f"{self.train.norm!r}, {self.generator.norm!r}, {self.discriminator.norm!r}"
            )
        smallest = min_input_size(self.discriminator)
        if self.roi.out_size < smallest:
            raise ConfigError(
                f"roi.out_size {self.roi.out_size} is below the critic's minimum input {smallest}"
            )
        if self.train.crop_size < smallest:
            raise ConfigError(
                f"train.crop_size {self.train.crop_size} is below the critic's minimum input {smallest}"
            )
        if self.train.crop_size > min(self.scene.height, self.scene.width):
            raise ConfigError(
                f"train.crop_size {self.train.crop_size} does not fit the "
                f"{self.scene.height}x{self.scene.width} scenes"
            )

    @property
    def seed(self) -> int:
        return self.train.seed

    @property
    def data_root(self) -> Path:
        return Path(self.data.root) if self.data.root else IR2VI_OUTPUT_ROOT / self.name / "data"

    @property
    def run_dir(self) -> Path:
        return Path(self.data.run_dir) if self.data.run_dir else IR2VI_OUTPUT_ROOT / self.name / "train"

    def to_dict(self) -> dict:
        return json.loads(json.dumps(asdict(self)))

    def config_hash(self) -> str:
        return payload_hash(self.to_dict())

    @classmethod
    def from_dict(cls, payload: dict) -> "RunConfig":
        payload = copy.deepcopy(payload)
        unknown = set(payload) - set(SECTIONS) - {"name", "seed"}
        if unknown:
            raise ConfigError(f"Unknown run config keys: {sorted(unknown)}")

        sections = {name: dict(payload.get(name) or {}) for name in SECTIONS}
        train = sections["train"]
        crop = train.get("crop_size", IR2VI_CROP_SIZE)
        sections["scene"] = {"height": crop, "width": crop} | sections["scene"]
        if "seed" in payload:
            if "seed" in train and train["seed"] != payload["seed"]:
                raise ConfigError(
                    f"seed given twice: {payload['seed']} and train.seed={train['seed']}"
                )
            train["seed"] = payload["seed"]
        if "weights" in train:
            train["weights"] = _build(LossWeights, train["weights"], "train.weights")

        # One norm tag for every network, whichever section names it
        explicit = [sections[s]["norm"] for s in ("train", "generator", "discriminator") if "norm" in sections[s]]
        if explicit:
            for name in ("train", "generator", "discriminator"):
                sections[name].setdefault("norm", explicit[0])

        return cls(
            name=str(payload.get("name", "custom")),
            scene=_build(SceneSpec, sections["scene"], "scene"),
            generator=_build(GeneratorConfig, sections["generator"], "generator"),
            discriminator=_build(DiscriminatorConfig, sections["discriminator"], "discriminator"),
            roi=_build(RoiPoolSpec, sections["roi"], "roi"),
            train=_build(TrainConfig, train, "train"),
            detector=_build(BlobDetectorConfig, sections["detector"], "detector"),
            data=_build(DataConfig, sections["data"], "data"),
        )


def _build(cls: type, values: dict, where: str) -> Any:
    if not isinstance(values, dict):
        raise ConfigError(f"{where} must be an object, got {type(values).__name__}")
    allowed = {f.name for f in fields(cls)}
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"Unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**values)
    except TypeError as exc:
        raise ConfigError(f"Invalid {where}: {exc}") from exc


def parse_override(text: str) -> tuple[str, Any]:
    """``"train.lr=1e-4"`` -> ``("train.lr", 1e-4)``; values are parsed as JSON when possible."""
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"Override must look like section.key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def apply_overrides(payload: dict, overrides: dict[str, Any]) -> dict:
    """Set dotted keys on a copy of ``payload``; flags win over the file."""
    out = copy.deepcopy(payload)
    for dotted, value in overrides.items():
        node = out
        *parents, leaf = dotted.split(".")
        for part in parents:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"Cannot override {dotted!r}: {part!r} is not a section")
            node = child
        node[leaf] = value
    return out


def load_run_config(source: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Resolve a profile name or JSON file, then apply ``overrides``."""
    from ir2vi.profiles import DEFAULT_PROFILE, REGISTERED_PROFILES

    source = DEFAULT_PROFILE if source is None else source
    if str(source) in REGISTERED_PROFILES:
        payload = copy.deepcopy(REGISTERED_PROFILES[str(source)])
    else:
        path = Path(source)
        if not path.is_file():
            raise ConfigError(
                f"{source!r} is neither a registered profile {sorted(REGISTERED_PROFILES)} "
                f"nor a config file"
            )
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        payload.setdefault("name", path.stem)
    return RunConfig.from_dict(apply_overrides(payload, overrides or {}))
