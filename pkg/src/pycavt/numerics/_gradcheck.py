"""Central finite differences as an oracle for reverse-mode gradients."""
from __future__ import annotations

import logging
import math
from warnings import warn

import torch

from ..common import NumericError

logger = logging.getLogger(__name__)


def _scalar(f):
    with torch.no_grad():
        value = f()
    if value.numel() != 1:
        raise NumericError(f"f must return a scalar; got shape {tuple(value.shape)}")
    value = float(value)
    if not math.isfinite(value):
        raise NumericError("f returned a non-finite value")
    return value


def gradient_errors(f, params, h=1e-5, corrupt=None):
    """Compare autograd gradients with central differences, per parameter.

    Args:
        f (callable): No-argument function returning a scalar tensor that
            depends on ``params``.
        params (dict of str to torch.Tensor): Leaf tensors to check, keyed
            by name. Each is perturbed in place and restored afterwards.
        h (float): Perturbation size.
        corrupt (callable, optional): ``corrupt(name, grad) -> grad`` applied
            to the analytic gradients before comparison. Used as a negative
            control.

    Returns:
        dict of str to float: Maximum relative error per parameter, with
        denominator ``max(|analytic|, |numeric|, 1e-8)``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    names = list(params)
    tensors = [params[name] for name in names]
    if any(t.dtype != torch.float64 for t in tensors):
        warn("finite differences are only meaningful at 64-bit precision")
        raise NumericError("gradient checking requires float64 parameters")

    value = f()
    if value.numel() != 1:
        raise NumericError(f"f must return a scalar; got shape {tuple(value.shape)}")
    analytic = torch.autograd.grad(value, tensors, allow_unused=True)
    analytic = [
        torch.zeros_like(t) if g is None else g.detach()
        for t, g in zip(tensors, analytic)
    ]
    if corrupt is not None:
        analytic = [corrupt(name, g) for name, g in zip(names, analytic)]

    errors = {}
    for name, tensor, grad in zip(names, tensors, analytic):
        flat = tensor.detach().view(-1)
        grad = grad.reshape(-1)
        worst = 0.0
        for i in range(flat.numel()):
            original = float(flat[i])
            flat[i] = original + h
            f_plus = _scalar(f)
            flat[i] = original - h
            f_minus = _scalar(f)
            flat[i] = original
            numeric = (f_plus - f_minus) / (2 * h)
            exact = float(grad[i])
            denom = max(abs(exact), abs(numeric), 1e-8)
            worst = max(worst, abs(exact - numeric) / denom)
        errors[name] = worst
        logger.debug("gradcheck %s: max relative error %.3e", name, worst)
    return errors


def finite_diff_check(f, params, h=1e-5):
    """Maximum relative error between autograd and central differences.

    Args:
        f (callable): No-argument function returning a scalar tensor.
        params (list or dict of torch.Tensor): Leaf tensors ``f`` depends on.
        h (float): Perturbation size.

    Returns:
        float: The largest relative error over every coordinate.
    """
    if not isinstance(params, dict):
        params = {str(i): p for i, p in enumerate(params)}
    errors = gradient_errors(f, params, h=h)
    return max(errors.values()) if errors else 0.0
