"""Error hierarchy. Every error raised on purpose by ir2vi derives from ``IR2VIError``."""


class IR2VIError(Exception):
    """Base class for ir2vi errors."""


class ContractError(IR2VIError, ValueError):
    """An input violates a documented precondition (range tag, box validity...)."""


class ShapeError(ContractError):
    """An array or tensor has a shape the operation cannot accept."""


class DomainMismatchError(ContractError):
    """A batch tagged with one domain was passed where the other is expected."""


class ConfigError(IR2VIError, ValueError):
    """A configuration section failed validation."""


class ManifestError(IR2VIError):
    """A dataset manifest is malformed or references missing files."""


class CheckpointError(IR2VIError):
    """A checkpoint is missing, unreadable, or could not be written."""


class NonFiniteLossError(IR2VIError):
    """A loss term evaluated to NaN or infinity during training."""

    def __init__(self, term: str, value: float, iteration: int) -> None:
        self.term = term
        self.value = value
        self.iteration = iteration
        super().__init__(
            f"Loss term '{term}' is not finite ({value}) at iteration {iteration}"
        )
