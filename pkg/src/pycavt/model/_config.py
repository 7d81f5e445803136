"""Architecture hyperparameters of the class-attention video transformer."""
from __future__ import annotations

from dataclasses import asdict
from dataclasses import dataclass
from enum import Enum

from ..common import ConfigError
from ..common import DimensionError


class HeadActivation(str, Enum):
    """Map from the head's real output to an intensity in [0, 1]."""

    SIGMOID = "sigmoid"
    CLAMP = "clamp"


@dataclass(frozen=True)
class CavTConfig:
    """Shape and initialization of a CavT network.

    Args:
        T (int): Frames per input sequence.
        H (int): Frame height in pixels.
        W (int): Frame width in pixels.
        t (int): Temporal patch size; must divide ``T``.
        p (int): Spatial patch size; must divide ``H`` and ``W``.
        c (int): Embedding width.
        h (int): Attention heads; must divide ``c``.
        L1 (int): Number of self-attention blocks.
        L2 (int): Number of class-attention blocks.
        mlp_ratio (float): MLP hidden width as a multiple of ``c``.
        layerscale_init (float): Initial value of every residual diagonal.
        drop_rate (float): Stochastic-depth probability per residual branch.
        use_positional (bool): Add a learnable, zero-initialized k x c table
            to the patch embeddings.
        head_activation (HeadActivation): ``sigmoid`` or ``clamp``.
        init_std (float): Standard deviation of the truncated normal used
            for projection weights and the class token.
    """

    T: int = 4
    H: int = 8
    W: int = 8
    t: int = 2
    p: int = 4
    c: int = 16
    h: int = 2
    L1: int = 2
    L2: int = 1
    mlp_ratio: float = 4.0
    layerscale_init: float = 1e-5
    drop_rate: float = 0.05
    use_positional: bool = True
    head_activation: HeadActivation = HeadActivation.SIGMOID
    init_std: float = 0.02

    def __post_init__(self):
        for name in ("T", "H", "W", "t", "p", "c", "h"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.L1 < 0 or self.L2 < 0:
            raise ConfigError("L1 and L2 must be non-negative")
        if self.T % self.t:
            raise DimensionError(f"t = {self.t} does not divide T = {self.T}")
        if self.H % self.p or self.W % self.p:
            raise DimensionError(
                f"p = {self.p} does not divide H = {self.H} and W = {self.W}"
            )
        if self.c % self.h:
            raise DimensionError(f"h = {self.h} does not divide c = {self.c}")
        if self.mlp_ratio <= 0 or self.hidden < 1:
            raise ConfigError("mlp_ratio must give a positive hidden width")
        if not 0 <= self.drop_rate < 1:
            raise ConfigError("drop_rate must lie in [0, 1)")
        if self.layerscale_init < 0 or self.init_std < 0:
            raise ConfigError("layerscale_init and init_std must be non-negative")
        object.__setattr__(
            self, "head_activation", HeadActivation(self.head_activation)
        )

    @property
    def num_patches(self):
        """``k = (T/t) * (H/p) * (W/p)``."""
        return (self.T // self.t) * (self.H // self.p) * (self.W // self.p)

    @property
    def patch_dim(self):
        """Values per flattened patch, ``3 * t * p * p``."""
        return 3 * self.t * self.p * self.p

    @property
    def hidden(self):
        """MLP hidden width."""
        return int(round(self.mlp_ratio * self.c))

    def to_dict(self):
        """Plain ``{name: value}`` mapping with enums as their values."""
        out = asdict(self)
        out["head_activation"] = self.head_activation.value
        return out
