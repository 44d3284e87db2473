"""History of generated images shown to the global critics.

Until full, every fake is stored and returned. Once full, each fake is either
returned as is, or (with probability 1/2) swapped with a random stored one,
which is returned instead.
"""

import numpy as np
import torch


class ReplayBuffer:
    def __init__(self, capacity: int = 50, rng: np.random.Generator | None = None) -> None:
        self.capacity = capacity
        self.rng = rng if rng is not None else np.random.default_rng()
        self.images: list[torch.Tensor] = []

    def __len__(self) -> int:
        return len(self.images)

    def query(self, fakes: torch.Tensor) -> torch.Tensor:
        """Return a batch of the same shape mixing fresh and replayed fakes."""
        fakes = fakes.detach()
        if self.capacity == 0:
            return fakes
        out = []
        for image in fakes:
            if len(self.images) < self.capacity:
                self.images.append(image.clone())
                out.append(image)
            elif self.rng.random() < 0.5:
                idx = int(self.rng.integers(0, self.capacity))
                out.append(self.images[idx])
                self.images[idx] = image.clone()
            else:
                out.append(image)
        return torch.stack(out)

    def state_dict(self) -> dict:
        return {
            "capacity": self.capacity,
            "images": torch.stack(self.images) if self.images else None,
            "rng": self.rng.bit_generator.state,
        }

    def load_state_dict(self, state: dict) -> None:
        self.capacity = int(state["capacity"])
        stored = state["images"]
        self.images = [] if stored is None else [img.clone() for img in stored]
        self.rng.bit_generator.state = state["rng"]
