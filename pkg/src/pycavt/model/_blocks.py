"""Building blocks of the class-attention video transformer.

Every block works on batched token tensors of shape (B, N, c). Residual
branches are multiplied channel-wise by a learnable diagonal (``lambda`` in
the self-attention stage, ``beta`` in the class-attention stage) and, during
training, by a per-sample stochastic-depth scale.
"""
from __future__ import annotations

import math

import torch
from torch import nn

from ..numerics import gelu
from ..numerics import layer_norm
from ..numerics import LN_EPS
from ..numerics import matmul
from ..numerics import softmax_lastdim


def _branch(x, scale):
    # scale: None (kept, unscaled) or (B,) with 0 for dropped branches
    if scale is None:
        return x
    return x * scale.to(x.dtype).reshape(-1, *([1] * (x.ndim - 1)))


class LayerNorm(nn.Module):
    """Row-wise normalization with a learnable gain and bias."""

    def __init__(self, dim, eps=LN_EPS):
        super().__init__()
        self.eps = eps
        self.gain = nn.Parameter(torch.ones(dim))
        self.bias = nn.Parameter(torch.zeros(dim))

    def forward(self, x):
        return layer_norm(x, self.gain, self.bias, self.eps)


class Mlp(nn.Module):
    """Two linear layers with a GELU in between, as in ViT."""

    def __init__(self, dim, hidden):
        super().__init__()
        self.fc1 = nn.Linear(dim, hidden)
        self.fc2 = nn.Linear(hidden, dim)

    def forward(self, x):
        return self.fc2(gelu(self.fc1(x)))


class SelfAttention(nn.Module):
    """Multi-head self-attention over all tokens.

    Args:
        dim (int): Token width ``c``.
        num_heads (int): Number of heads ``h``; scores are scaled by
            ``1 / sqrt(c / h)``.
    """

    def __init__(self, dim, num_heads):
        super().__init__()
        self.num_heads = num_heads
        self.scale = 1.0 / math.sqrt(dim / num_heads)
        self.qkv = nn.Linear(dim, 3 * dim)
        self.proj = nn.Linear(dim, dim)
        self.keep_attention = False

    def forward(self, x):
        B, N, C = x.shape
        qkv = self.qkv(x).reshape(B, N, 3, self.num_heads, C // self.num_heads)
        q, k, v = qkv.permute(2, 0, 3, 1, 4)  # each (B, h, N, d)
        attn = softmax_lastdim(matmul(q, k.transpose(-2, -1)) * self.scale)
        if self.keep_attention:
            self.attention_ = attn.detach()
        out = matmul(attn, v).transpose(1, 2).reshape(B, N, C)
        return self.proj(out)


class ClassAttention(nn.Module):
    """Attention where only the class row queries ``[cls; patches]``.

    Args:
        dim (int): Token width ``c``.
        num_heads (int): Number of heads ``h``.
    """

    def __init__(self, dim, num_heads):
        super().__init__()
        self.num_heads = num_heads
        self.scale = 1.0 / math.sqrt(dim / num_heads)
        self.q = nn.Linear(dim, dim)
        self.k = nn.Linear(dim, dim)
        self.v = nn.Linear(dim, dim)
        self.o = nn.Linear(dim, dim)
        self.keep_attention = False

    def forward(self, z):
        """
        Args:
            z (torch.Tensor): Normalized ``[cls; patches]`` of shape
                (B, k + 1, c); row 0 is the class token.

        Returns:
            torch.Tensor: Attention output for the class row, (B, 1, c).
        """
        B, N, C = z.shape
        h, d = self.num_heads, C // self.num_heads
        q = self.q(z[:, :1]).reshape(B, 1, h, d).transpose(1, 2)
        k = self.k(z).reshape(B, N, h, d).transpose(1, 2)
        v = self.v(z).reshape(B, N, h, d).transpose(1, 2)
        attn = softmax_lastdim(matmul(q, k.transpose(-2, -1)) * self.scale)
        if self.keep_attention:
            self.attention_ = attn.detach()  # (B, h, 1, k + 1)
        out = matmul(attn, v).transpose(1, 2).reshape(B, 1, C)
        return self.o(out)


class SelfAttentionBlock(nn.Module):
    """``u' = diag(lambda1) MSA(LN(u)) + u`` then
    ``out = diag(lambda2) MLP(LN(u')) + u'``."""

    def __init__(self, dim, num_heads, hidden, layerscale_init):
        super().__init__()
        self.lambda1 = nn.Parameter(torch.full((dim,), float(layerscale_init)))
        self.lambda2 = nn.Parameter(torch.full((dim,), float(layerscale_init)))
        self.norm1 = LayerNorm(dim)
        self.attn = SelfAttention(dim, num_heads)
        self.norm2 = LayerNorm(dim)
        self.mlp = Mlp(dim, hidden)

    def forward(self, u, scales=(None, None)):
        u = u + _branch(self.lambda1 * self.attn(self.norm1(u)), scales[0])
        return u + _branch(self.lambda2 * self.mlp(self.norm2(u)), scales[1])


class ClassAttentionBlock(nn.Module):
    """Refine the class token from the patch tokens; patches pass through.

    ``cls' = diag(beta1) CA(LN([cls; u])) + cls`` and
    ``cls'' = diag(beta2) MLP(LN(cls')) + cls'``.
    """

    def __init__(self, dim, num_heads, hidden, layerscale_init):
        super().__init__()
        self.beta1 = nn.Parameter(torch.full((dim,), float(layerscale_init)))
        self.beta2 = nn.Parameter(torch.full((dim,), float(layerscale_init)))
        self.norm1 = LayerNorm(dim)
        self.attn = ClassAttention(dim, num_heads)
        self.norm2 = LayerNorm(dim)
        self.mlp = Mlp(dim, hidden)

    def forward(self, cls, u, scales=(None, None)):
        z = self.norm1(torch.cat([cls, u], dim=-2))
        cls = cls + _branch(self.beta1 * self.attn(z), scales[0])
        return cls + _branch(self.beta2 * self.mlp(self.norm2(cls)), scales[1])
