from __future__ import annotations

from ._blocks import ClassAttention
from ._blocks import ClassAttentionBlock
from ._blocks import LayerNorm
from ._blocks import Mlp
from ._blocks import SelfAttention
from ._blocks import SelfAttentionBlock
from ._checkpoint import load_checkpoint
from ._checkpoint import read_checkpoint
from ._checkpoint import write_checkpoint
from ._config import CavTConfig
from ._config import HeadActivation
from ._network import build_network
from ._network import CavTNetwork
from ._network import count_params
from ._network import parameter_shapes
from ._patches import patchify
from ._patches import permute_patches
from ._patches import unpatchify

__all__ = [
    "CavTConfig",
    "CavTNetwork",
    "ClassAttention",
    "ClassAttentionBlock",
    "HeadActivation",
    "LayerNorm",
    "Mlp",
    "SelfAttention",
    "SelfAttentionBlock",
    "build_network",
    "count_params",
    "load_checkpoint",
    "parameter_shapes",
    "patchify",
    "permute_patches",
    "read_checkpoint",
    "unpatchify",
    "write_checkpoint",
]
