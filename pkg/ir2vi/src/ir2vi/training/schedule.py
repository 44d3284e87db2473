from ir2vi.exceptions import ContractError
from ir2vi.training.config import TrainConfig


def lr_at(epoch: int, cfg: TrainConfig) -> float:
    """Learning rate of 0-indexed ``epoch``.

    Constant ``cfg.lr`` for the first ``epochs_const`` epochs, then linear decay
    reaching exactly 0 at the end boundary ``epoch == epochs_const + epochs_decay``.
    """
    total = cfg.total_epochs
    if not 0 <= epoch <= total:
        raise ContractError(f"epoch {epoch} outside the schedule [0, {total}]")
    if epoch == total:
        return 0.0
    if epoch < cfg.epochs_const:
        return cfg.lr
    # fraction first: keeps lr * 0.5 bit-exact at the midpoint
    return cfg.lr * ((total - epoch) / cfg.epochs_decay)
