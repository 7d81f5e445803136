"""Per-branch stochastic depth decisions for one forward pass."""
from __future__ import annotations

from dataclasses import dataclass

import torch

from ..common import ConfigError


@dataclass(frozen=True)
class DepthPlan:
    """Scale of every residual branch for every sample of a batch.

    ``scales`` has shape (2 * (L1 + L2), B). Row ``2i`` and ``2i + 1`` belong
    to self-attention block ``i``; rows ``2 * L1 + 2j`` and ``2 * L1 + 2j + 1``
    to class-attention block ``j``. A dropped branch has scale 0, a kept one
    ``1 / (1 - drop_rate)``.
    """

    L1: int
    L2: int
    scales: torch.Tensor

    def sa(self, i):
        return self.scales[2 * i], self.scales[2 * i + 1]

    def ca(self, j):
        offset = 2 * self.L1
        return self.scales[offset + 2 * j], self.scales[offset + 2 * j + 1]

    @property
    def dropped(self):
        """Boolean mask of dropped branches."""
        return self.scales == 0


def stochastic_depth_plan(
    L1, L2, drop_rate, generator=None, batch_size=1, training=True
):
    """Draw keep/drop decisions for the ``2 * (L1 + L2)`` residual branches.

    Args:
        L1 (int): Self-attention blocks.
        L2 (int): Class-attention blocks.
        drop_rate (float): Probability of dropping each branch.
        generator (torch.Generator, optional): Source of randomness.
        batch_size (int): Independent decisions per branch.
        training (bool): At inference every branch is kept, unscaled.

    Returns:
        DepthPlan: The decisions.
    """
    if not 0 <= drop_rate < 1:
        raise ConfigError("drop_rate must lie in [0, 1)")
    shape = (2 * (L1 + L2), batch_size)
    if not training or drop_rate == 0:
        return DepthPlan(L1, L2, torch.ones(shape, dtype=torch.float64))
    keep = torch.rand(shape, generator=generator, dtype=torch.float64) >= drop_rate
    return DepthPlan(L1, L2, keep.to(torch.float64) / (1 - drop_rate))
