"""The class-attention video transformer regressor."""
from __future__ import annotations

import logging
import math

import torch
from torch import nn

from ..common import check_finite
from ..common import ContractError
from ..common import DimensionError
from ..common import NumericError
from ..numerics import matmul
from ._blocks import ClassAttentionBlock
from ._blocks import LayerNorm
from ._blocks import SelfAttentionBlock
from ._config import HeadActivation
from ._patches import patchify

logger = logging.getLogger(__name__)


def _annotate(error, where):
    # re-raise with the failing layer named, keeping the exception type
    if isinstance(error, (DimensionError, NumericError, ContractError)):
        return type(error)(f"{where}: {error}")
    return error


class CavTNetwork(nn.Module):
    """Patch embedding, ``L1`` self-attention blocks, ``L2`` class-attention
    blocks and a bounded regression head.

    Parameters are registered in declaration order (``embedding``,
    ``positional``, ``cls_token``, then the blocks, then ``head``), which is
    also the order of ``named_parameters()`` and of checkpoints.

    Args:
        config (CavTConfig): Architecture hyperparameters.
    """

    def __init__(self, config):
        super().__init__()
        self.config = config
        c = config.c
        self.embedding = nn.Parameter(torch.zeros(config.patch_dim, c))
        if config.use_positional:
            self.positional = nn.Parameter(torch.zeros(config.num_patches, c))
        else:
            self.register_parameter("positional", None)
        self.cls_token = nn.Parameter(torch.zeros(c))
        self.sa_blocks = nn.ModuleList(
            SelfAttentionBlock(c, config.h, config.hidden, config.layerscale_init)
            for _ in range(config.L1)
        )
        self.ca_blocks = nn.ModuleList(
            ClassAttentionBlock(c, config.h, config.hidden, config.layerscale_init)
            for _ in range(config.L2)
        )
        self.head = nn.Linear(c, 1)
        self.reset_parameters()

    def reset_parameters(self):
        """Truncated-normal weights (cut at two standard deviations), zero
        biases and positional table, unit LayerNorm gains, and residual
        diagonals at ``layerscale_init``."""
        std = self.config.init_std

        def trunc_normal(tensor):
            if std == 0:
                return nn.init.zeros_(tensor)
            return nn.init.trunc_normal_(tensor, std=std, a=-2 * std, b=2 * std)

        with torch.no_grad():
            trunc_normal(self.embedding)
            trunc_normal(self.cls_token)
            if self.positional is not None:
                self.positional.zero_()
            for module in self.modules():
                if isinstance(module, nn.Linear):
                    trunc_normal(module.weight)
                    nn.init.zeros_(module.bias)
                elif isinstance(module, LayerNorm):
                    module.gain.fill_(1.0)
                    module.bias.zero_()
            for block in self.sa_blocks:
                block.lambda1.fill_(self.config.layerscale_init)
                block.lambda2.fill_(self.config.layerscale_init)
            for block in self.ca_blocks:
                block.beta1.fill_(self.config.layerscale_init)
                block.beta2.fill_(self.config.layerscale_init)

    def keep_attention(self, flag=True):
        """Store the latest attention weights on each attention module as
        ``attention_``."""
        for block in [*self.sa_blocks, *self.ca_blocks]:
            block.attn.keep_attention = flag
        return self

    def embed(self, patches):
        """Project flattened patches, ``x_e = patches E`` (+ positional)."""
        if patches.shape[-1] != self.config.patch_dim:
            raise DimensionError(
                f"patches have {patches.shape[-1]} columns; the embedding "
                f"expects {self.config.patch_dim}"
            )
        x = matmul(patches, self.embedding)
        if self.positional is not None:
            if x.shape[-2] != self.config.num_patches:
                raise DimensionError(
                    f"{x.shape[-2]} patches given; the positional table "
                    f"has {self.config.num_patches} rows"
                )
            x = x + self.positional
        return x

    def encode(self, patches, plan=None):
        """Run the self-attention stage, returning patch tokens (B, k, c)."""
        u = self.embed(patches)
        for i, block in enumerate(self.sa_blocks):
            scales = (None, None) if plan is None else plan.sa(i)
            try:
                u = block(u, scales)
            except (DimensionError, NumericError) as error:
                raise _annotate(error, f"sa_blocks.{i}") from error
        return u

    def pool(self, u, plan=None):
        """Run the class-attention stage, returning the class row (B, c)."""
        cls = self.cls_token.expand(u.shape[0], 1, -1)
        for j, block in enumerate(self.ca_blocks):
            scales = (None, None) if plan is None else plan.ca(j)
            try:
                cls = block(cls, u, scales)
            except (DimensionError, NumericError) as error:
                raise _annotate(error, f"ca_blocks.{j}") from error
        return cls[:, 0]

    def forward_patches(self, patches, plan=None, logits=False):
        """Predict from flattened patches of shape ([B,] k, 3tp^2).

        Args:
            patches (torch.Tensor): Output of :func:`patchify`.
            plan (DepthPlan, optional): Stochastic-depth decisions; ``None``
                keeps every branch unscaled, as at inference.
            logits (bool): Return the head's real output before the bounded
                activation.

        Returns:
            torch.Tensor: Intensities in [0, 1] of shape (B,), or a scalar
            for unbatched input.
        """
        unbatched = patches.ndim == 2
        if unbatched:
            patches = patches.unsqueeze(0)
        cls = self.pool(self.encode(patches, plan), plan)
        z = self.head(cls).squeeze(-1)
        if logits:
            y = z
        elif self.config.head_activation is HeadActivation.SIGMOID:
            y = torch.sigmoid(z)
        else:
            y = torch.clamp(z, 0.0, 1.0)
        check_finite(y, "network output")
        return y[0] if unbatched else y

    def forward(self, frames, plan=None, logits=False):
        """Predict engagement intensity from frames scaled to [0, 1].

        Args:
            frames (torch.Tensor): Shape (T, H, W, 3) or (B, T, H, W, 3).
            plan (DepthPlan, optional): Stochastic-depth decisions.
            logits (bool): Skip the bounded activation.

        Returns:
            torch.Tensor: Intensities of shape (B,) or a scalar.
        """
        cfg = self.config
        if frames.ndim not in (4, 5) or tuple(frames.shape[-4:]) != (
            cfg.T,
            cfg.H,
            cfg.W,
            3,
        ):
            raise DimensionError(
                f"frames of shape {tuple(frames.shape)} do not match the "
                f"configured ({cfg.T}, {cfg.H}, {cfg.W}, 3)"
            )
        return self.forward_patches(patchify(frames, cfg.t, cfg.p), plan, logits)


def build_network(config, seed=0, dtype=torch.float64):
    """Construct and initialize a network reproducibly from ``seed``.

    The global torch generator is forked, so callers' random state is left
    untouched.
    """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        network = CavTNetwork(config)
    return network.to(dtype)


def _block_shapes(prefix, c, hidden, diagonals, projections):
    shapes = [(f"{prefix}.{name}", (c,)) for name in diagonals]
    shapes += [(f"{prefix}.norm1.gain", (c,)), (f"{prefix}.norm1.bias", (c,))]
    for name, rows in projections:
        shapes += [
            (f"{prefix}.attn.{name}.weight", (rows, c)),
            (f"{prefix}.attn.{name}.bias", (rows,)),
        ]
    shapes += [(f"{prefix}.norm2.gain", (c,)), (f"{prefix}.norm2.bias", (c,))]
    shapes += [
        (f"{prefix}.mlp.fc1.weight", (hidden, c)),
        (f"{prefix}.mlp.fc1.bias", (hidden,)),
        (f"{prefix}.mlp.fc2.weight", (c, hidden)),
        (f"{prefix}.mlp.fc2.bias", (c,)),
    ]
    return shapes


def parameter_shapes(config):
    """Names and shapes of every parameter, in declaration order, computed
    from ``config`` alone."""
    c, hidden = config.c, config.hidden
    shapes = [("embedding", (config.patch_dim, c))]
    if config.use_positional:
        shapes.append(("positional", (config.num_patches, c)))
    shapes.append(("cls_token", (c,)))
    for i in range(config.L1):
        shapes += _block_shapes(
            f"sa_blocks.{i}",
            c,
            hidden,
            ("lambda1", "lambda2"),
            [("qkv", 3 * c), ("proj", c)],
        )
    for j in range(config.L2):
        shapes += _block_shapes(
            f"ca_blocks.{j}",
            c,
            hidden,
            ("beta1", "beta2"),
            [("q", c), ("k", c), ("v", c), ("o", c)],
        )
    shapes += [("head.weight", (1, c)), ("head.bias", (1,))]
    return shapes


def count_params(config):
    """Exact number of scalar parameters of a network built from ``config``."""
    return sum(math.prod(shape) for _, shape in parameter_shapes(config))
