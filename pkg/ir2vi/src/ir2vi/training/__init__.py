"""Optimization protocol: config, lr schedule and replay buffer.

The loop itself lives in ``ir2vi.training.runner`` and checkpoints in
``ir2vi.training.state``; both depend on ``ir2vi.run_config``, which imports
this package.
"""

from ir2vi.training.config import TrainConfig
from ir2vi.training.replay import ReplayBuffer
from ir2vi.training.schedule import lr_at

__all__ = ["ReplayBuffer", "TrainConfig", "lr_at"]
