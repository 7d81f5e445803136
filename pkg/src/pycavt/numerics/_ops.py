"""Dense tensor operations with shape contracts, on top of torch autograd.

A tensor that requires grad plays the role of a differentiable value: its
``grad_fn`` records the producing operation and :func:`backward` traverses
the recorded graph once, in topological order, accumulating into ``.grad``.
"""
from __future__ import annotations

import logging

import torch
import torch.nn.functional as F

from ..common import check_finite
from ..common import ContractError
from ..common import DimensionError

logger = logging.getLogger(__name__)

LN_EPS = 1e-6

# attribute set on a root once its graph has been consumed
_CONSUMED = "_pycavt_backward_done"


def as_tensor(data, dtype=torch.float64):
    """Convert array-like ``data`` to a contiguous tensor of ``dtype``."""
    tensor = torch.as_tensor(data, dtype=dtype)
    if tensor.numel() == 0:
        raise DimensionError(f"empty tensor of shape {tuple(tensor.shape)}")
    return tensor.contiguous()


def matmul(a, b):
    """Matrix product of ``a`` [..., m, n] and ``b`` [n, p] or [..., n, p].

    A two-dimensional ``b`` is a weight matrix shared by every leading index
    of ``a``. Otherwise both operands must carry identical leading
    dimensions; nothing else is broadcast.

    Args:
        a (torch.Tensor): Left operand, at least 2-D.
        b (torch.Tensor): Right operand, at least 2-D.

    Returns:
        torch.Tensor: Product of shape [..., m, p].
    """
    if a.ndim < 2 or b.ndim < 2:
        raise DimensionError(
            f"matmul needs operands of rank >= 2; got {tuple(a.shape)} "
            f"and {tuple(b.shape)}"
        )
    if a.shape[-1] != b.shape[-2]:
        raise DimensionError(
            f"matmul inner dimensions differ: {tuple(a.shape)} x {tuple(b.shape)}"
        )
    if b.ndim > 2 and a.shape[:-2] != b.shape[:-2]:
        raise DimensionError(
            f"matmul leading dimensions differ: {tuple(a.shape)} x {tuple(b.shape)}"
        )
    return check_finite(torch.matmul(a, b), "matmul output")


def softmax_lastdim(a):
    """Softmax over the last dimension, stabilized by max subtraction."""
    if a.ndim == 0 or a.numel() == 0:
        raise DimensionError(f"softmax of an empty tensor {tuple(a.shape)}")
    return check_finite(torch.softmax(a, dim=-1), "softmax output")


def layer_norm(a, gain, bias, eps=LN_EPS):
    """Normalize each row of ``a`` over its last dimension, then apply
    the affine ``gain`` and ``bias``.

    Args:
        a (torch.Tensor): Input of shape [..., c].
        gain (torch.Tensor): Scale of shape [c].
        bias (torch.Tensor): Shift of shape [c].
        eps (float): Added to the biased variance.

    Returns:
        torch.Tensor: ``(a - mean) / sqrt(var + eps) * gain + bias``.
    """
    if a.ndim == 0 or a.shape[-1] == 0:
        raise DimensionError("layer_norm needs a non-empty last dimension")
    c = a.shape[-1]
    if gain.shape != (c,) or bias.shape != (c,):
        raise DimensionError(
            f"layer_norm affine parameters must have shape ({c},); got "
            f"gain {tuple(gain.shape)} and bias {tuple(bias.shape)}"
        )
    if eps <= 0:
        raise ValueError("eps must be positive")
    return check_finite(F.layer_norm(a, (c,), gain, bias, eps), "layer_norm output")


def gelu(a):
    """Gaussian error linear unit, exact erf form."""
    return F.gelu(a, approximate="none")


def backward(root, inputs=None):
    """Run reverse-mode differentiation from a scalar ``root``.

    Gradients accumulate into ``.grad`` of the leaves (or of ``inputs`` only,
    when given). A graph can be traversed once; build a new one, after
    :func:`zero_grad` if accumulation is not wanted, to differentiate again.

    Args:
        root (torch.Tensor): Scalar produced by differentiable operations.
        inputs (list of torch.Tensor, optional): Leaves to accumulate into.

    Returns:
        list of torch.Tensor or None: Gradients of ``inputs`` when given.
    """
    if root.numel() != 1:
        raise ContractError(
            f"backward needs a scalar root; got shape {tuple(root.shape)}"
        )
    if not root.requires_grad:
        raise ContractError("root does not depend on any differentiable value")
    if getattr(root, _CONSUMED, False):
        raise ContractError("backward already ran on this root; rebuild the graph")
    check_finite(root, "backward root")
    torch.autograd.backward(root, inputs=inputs)
    setattr(root, _CONSUMED, True)
    if inputs is not None:
        return [x.grad for x in inputs]
    return None


def zero_grad(params):
    """Clear accumulated gradients of ``params``."""
    for p in params:
        p.grad = None
