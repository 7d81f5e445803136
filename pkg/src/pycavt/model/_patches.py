from __future__ import annotations

import torch

from ..common import DimensionError


def _check(shape, t, p):
    T, H, W, C = shape[-4:]
    if T % t or H % p or W % p:
        raise DimensionError(
            f"frames of shape {tuple(shape)} cannot be cut into "
            f"{t}x{p}x{p} patches"
        )
    return T, H, W, C


def patchify(x, t, p):
    """Cut a frame sequence into flattened 3D patches.

    Rows are ordered temporal-major, then row-major over the spatial grid;
    each row is the flattened ``t x p x p x C`` block.

    Args:
        x (torch.Tensor): Frames of shape (T, H, W, C) or (B, T, H, W, C).
        t (int): Temporal patch size.
        p (int): Spatial patch size.

    Returns:
        torch.Tensor: Patches of shape ([B,] k, t*p*p*C).
    """
    if x.ndim not in (4, 5):
        raise DimensionError(
            f"frames must have shape ([B,] T, H, W, C); got {tuple(x.shape)}"
        )
    T, H, W, C = _check(x.shape, t, p)
    lead = x.shape[:-4]
    blocks = x.reshape(*lead, T // t, t, H // p, p, W // p, p, C)
    n = len(lead)
    order = list(range(n)) + [n + i for i in (0, 2, 4, 1, 3, 5, 6)]
    k = (T // t) * (H // p) * (W // p)
    return blocks.permute(order).reshape(*lead, k, t * p * p * C)


def unpatchify(patches, T, H, W, t, p, C=3):
    """Inverse of :func:`patchify`."""
    _check((T, H, W, C), t, p)
    k = (T // t) * (H // p) * (W // p)
    if patches.shape[-2:] != (k, t * p * p * C):
        raise DimensionError(
            f"expected patches of shape (..., {k}, {t * p * p * C}); "
            f"got {tuple(patches.shape)}"
        )
    lead = patches.shape[:-2]
    blocks = patches.reshape(*lead, T // t, H // p, W // p, t, p, p, C)
    n = len(lead)
    order = list(range(n)) + [n + i for i in (0, 3, 1, 4, 2, 5, 6)]
    return blocks.permute(order).reshape(*lead, T, H, W, C)


def permute_patches(patches, permutation):
    """Reorder the patch rows of ``patches`` by ``permutation``."""
    permutation = torch.as_tensor(permutation, dtype=torch.long)
    if sorted(permutation.tolist()) != list(range(patches.shape[-2])):
        raise DimensionError("permutation must reorder every patch row exactly once")
    return patches.index_select(-2, permutation)
