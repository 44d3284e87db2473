"""Named run configurations.

Each module exports a single PROFILE dict with the shape of
``RunConfig.to_dict()``; omitted sections and keys take their defaults:
    name: run name, also the output sub-directory
    scene: SceneSpec of synthetic data
    generator: GeneratorConfig
    discriminator: DiscriminatorConfig (shared by the four critics)
    roi: RoiPoolSpec
    train: TrainConfig, with nested ``weights``
    detector: BlobDetectorConfig
    data: DataConfig (paths and synthetic image count)
"""

from ir2vi.profiles.baseline import BASELINE_PROFILE
from ir2vi.profiles.published import PUBLISHED_PROFILE
from ir2vi.profiles.smoke import SMOKE_PROFILE
from ir2vi.profiles.toy import TOY_PROFILE

DEFAULT_PROFILE = "published"

REGISTERED_PROFILES: dict[str, dict] = {
    "published": PUBLISHED_PROFILE,
    "toy": TOY_PROFILE,
    "baseline": BASELINE_PROFILE,
    "smoke": SMOKE_PROFILE,
}
