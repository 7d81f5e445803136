from __future__ import annotations

import numpy as np
import torch
from sklearn.utils import check_array as skl_check_array

from .exceptions import DimensionError
from .exceptions import NumericError


def validate_video(x):
    """Check a frame stack of shape (n, H, W, C) and return it as an array.

    Args:
        x (np.ndarray): Frames, 8-bit or real valued.

    Returns:
        np.ndarray: The validated frames.
    """
    if not isinstance(x, np.ndarray):
        raise ValueError("x must be a numpy array of frames")
    x = skl_check_array(x, allow_nd=True, ensure_2d=False, dtype=None)
    if x.ndim != 4:
        raise DimensionError(
            f"frames must have shape (n, H, W, C); instead x.shape = {x.shape}"
        )
    if x.shape[0] < 1:
        raise DimensionError("a video needs at least one frame")
    return x


def validate_labels(labels):
    """Return labels as a float array after checking they lie in [0, 1]."""
    labels = skl_check_array(
        np.asarray(labels, dtype=float).reshape(-1, 1), ensure_2d=True
    ).ravel()
    if np.any(labels < 0) or np.any(labels > 1):
        raise ValueError("engagement labels must lie in [0, 1]")
    return labels


def check_finite(tensor, what="tensor"):
    """Raise NumericError when ``tensor`` holds NaN or Inf."""
    if isinstance(tensor, torch.Tensor):
        finite = bool(torch.isfinite(tensor).all())
    else:
        finite = bool(np.isfinite(tensor).all())
    if not finite:
        raise NumericError(f"{what} contains non-finite values")
    return tensor


def match_level(label, levels, tol=1e-6):
    """Return the entry of ``levels`` equal to ``label`` within ``tol``, or None."""
    for level in levels:
        if abs(float(label) - float(level)) <= tol:
            return level
    return None
