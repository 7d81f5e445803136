from __future__ import annotations

import torch

from ..common import DimensionError
from ..common import match_level


def level_weights(labels, class_weights):
    """Per-sample weights looked up from ``class_weights`` by label level.

    Args:
        labels (torch.Tensor): Intensities, shape (n,).
        class_weights (dict, optional): Level to positive weight.

    Returns:
        torch.Tensor: Weights of shape (n,), 1 where no level matches.
    """
    weights = torch.ones_like(labels)
    if class_weights:
        levels = list(class_weights)
        for i, label in enumerate(labels.tolist()):
            level = match_level(label, levels)
            if level is not None:
                weights[i] = float(class_weights[level])
    return weights


def mse_loss(predictions, labels, class_weights=None):
    """Mean of ``w_i * (y_i - label_i)**2``.

    Args:
        predictions (torch.Tensor): Predicted intensities, shape (n,).
        labels (torch.Tensor): Target intensities in [0, 1], shape (n,).
        class_weights (dict, optional): Level to weight; absent means all
            weights are 1, which gives the same bits as the plain mean.

    Returns:
        torch.Tensor: Scalar loss, differentiable in ``predictions``.
    """
    predictions = torch.as_tensor(predictions)
    labels = torch.as_tensor(labels, dtype=predictions.dtype)
    if predictions.ndim != 1 or predictions.shape != labels.shape:
        raise DimensionError(
            f"predictions {tuple(predictions.shape)} and labels "
            f"{tuple(labels.shape)} must be vectors of equal length"
        )
    if predictions.numel() == 0:
        raise DimensionError("mse_loss needs at least one prediction")
    if bool((labels < 0).any()) or bool((labels > 1).any()):
        raise ValueError("labels must lie in [0, 1]")
    weights = level_weights(labels, class_weights)
    return torch.mean(weights * (predictions - labels) ** 2)
