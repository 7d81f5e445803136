from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field

import torch

from ..common import ConfigError


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings.

    Args:
        learning_rate (float): Adam step size.
        epochs (int): Passes over the BorS-augmented training set.
        batch_size (int): Sequences per mini-batch.
        adam_beta1 (float): First-moment decay.
        adam_beta2 (float): Second-moment decay.
        adam_eps (float): Denominator guard.
        drop_rate (float, optional): Stochastic-depth probability per residual
            branch. None keeps the network's own ``CavTConfig.drop_rate``;
            a value replaces it in the trained network's configuration.
        class_weights (dict of float to float, optional): Loss weight per
            engagement level; levels not listed weigh 1.
        seed (int): Root of every random choice made during training.
        max_steps (int): Cap on optimizer steps; -1 for no cap.
        dtype (str): ``float64`` or ``float32``.
        num_workers (int): DataLoader worker processes.
    """

    learning_rate: float = 1e-5
    epochs: int = 20
    batch_size: int = 4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    drop_rate: float = None
    class_weights: dict = field(default=None, hash=False)
    seed: int = 0
    max_steps: int = -1
    dtype: str = "float64"
    num_workers: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.drop_rate is not None and not 0 <= self.drop_rate < 1:
            raise ConfigError("drop_rate must lie in [0, 1)")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.epochs < 0:
            raise ConfigError("epochs must be non-negative")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise ConfigError("Adam betas must lie in [0, 1)")
        if self.adam_eps <= 0:
            raise ConfigError("adam_eps must be positive")
        if self.dtype not in ("float64", "float32"):
            raise ConfigError("dtype must be float64 or float32")
        if self.class_weights is not None:
            if any(w <= 0 for w in self.class_weights.values()):
                raise ConfigError("class weights must be positive")

    @property
    def torch_dtype(self):
        return getattr(torch, self.dtype)
