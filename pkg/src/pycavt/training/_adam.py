"""Adam with bias-corrected moment estimates."""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field

import torch

from ..common import DimensionError


@dataclass
class OptimizerState:
    """First and second moment estimates, one tensor per parameter."""

    exp_avg: list = field(default_factory=list)
    exp_avg_sq: list = field(default_factory=list)
    step: int = 0

    @classmethod
    def zeros_like(cls, params):
        return cls(
            exp_avg=[torch.zeros_like(p) for p in params],
            exp_avg_sq=[torch.zeros_like(p) for p in params],
        )


@torch.no_grad()
def adam_step(params, grads, state, lr=1e-5, betas=(0.9, 0.999), eps=1e-8):
    """Apply one Adam update in place.

    ``m = b1 m + (1 - b1) g``, ``v = b2 v + (1 - b2) g^2`` and
    ``theta -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)``.

    Args:
        params (list of torch.Tensor): Parameters, updated in place.
        grads (list of torch.Tensor or None): Gradients; ``None`` is zero.
        state (OptimizerState): Moments, updated in place.
        lr (float): Step size.
        betas (tuple of float): Moment decay rates.
        eps (float): Denominator guard.

    Returns:
        tuple: ``(params, state)``.
    """
    if not (len(params) == len(grads) == len(state.exp_avg)):
        raise DimensionError("params, grads and optimizer state differ in length")
    beta1, beta2 = betas
    state.step += 1
    correction1 = 1 - beta1**state.step
    correction2 = 1 - beta2**state.step
    for p, g, m, v in zip(params, grads, state.exp_avg, state.exp_avg_sq):
        if g is None:
            g = torch.zeros_like(p)
        if g.shape != p.shape or m.shape != p.shape:
            raise DimensionError(
                f"gradient {tuple(g.shape)} does not match parameter {tuple(p.shape)}"
            )
        m.mul_(beta1).add_(g, alpha=1 - beta1)
        v.mul_(beta2).addcmul_(g, g, value=1 - beta2)
        denom = (v / correction2).sqrt_().add_(eps)
        p.addcdiv_(m / correction1, denom, value=-lr)
    return params, state


class Adam(torch.optim.Optimizer):
    """``torch.optim`` front end over :func:`adam_step`, so the update can
    be driven by Lightning.

    Args:
        params (iterable): Parameters to optimize.
        lr (float): Step size.
        betas (tuple of float): Moment decay rates.
        eps (float): Denominator guard.
    """

    def __init__(self, params, lr=1e-5, betas=(0.9, 0.999), eps=1e-8):
        if lr <= 0:
            raise ValueError("lr must be positive")
        super().__init__(params, dict(lr=lr, betas=betas, eps=eps))

    def step(self, closure=None):
        loss = None
        if closure is not None:
            with torch.enable_grad():
                loss = closure()
        for group in self.param_groups:
            params = group["params"]
            if not params:
                continue
            state = self.state[params[0]]
            if "moments" not in state:
                state["moments"] = OptimizerState.zeros_like(params)
            adam_step(
                params,
                [p.grad for p in params],
                state["moments"],
                lr=group["lr"],
                betas=group["betas"],
                eps=group["eps"],
            )
        return loss
