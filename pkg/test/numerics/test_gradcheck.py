"""Finite-difference checks of reverse-mode gradients."""
from __future__ import annotations

import pytest
import torch
from pycavt.common import NumericError
from pycavt.model import ClassAttentionBlock
from pycavt.model import SelfAttentionBlock
from pycavt.numerics import finite_diff_check
from pycavt.numerics import gradient_errors


def _block(cls, seed, c=8, heads=2):
    torch.manual_seed(seed)
    block = cls(c, heads, 2 * c, layerscale_init=0.5).double()
    with torch.no_grad():
        for name, param in block.named_parameters():
            if "norm" not in name and "lambda" not in name and "beta" not in name:
                param.normal_(0.0, 0.3)
    return block


def test_quadratic():
    x = torch.tensor([1.0, 2.0, 3.0, -1.0, 0.5, 2.0], dtype=torch.float64)
    x.requires_grad_(True)
    A = torch.diag(torch.arange(1.0, 7.0, dtype=torch.float64))

    def f():
        return x @ A @ x + 3 * x.sum()

    assert finite_diff_check(f, [x], h=1e-4) < 1e-9


def test_self_attention_block():
    block = _block(SelfAttentionBlock, seed=0)
    generator = torch.Generator().manual_seed(1)
    u = 0.01 * torch.randn(1, 4, 8, generator=generator, dtype=torch.float64)
    R = 1e-3 * torch.randn(1, 4, 8, generator=generator, dtype=torch.float64)

    def f():
        return (R * block(u)).sum()

    assert finite_diff_check(f, dict(block.named_parameters())) < 1e-4


def test_class_attention_block():
    block = _block(ClassAttentionBlock, seed=2)
    generator = torch.Generator().manual_seed(3)
    cls = 0.01 * torch.randn(1, 1, 8, generator=generator, dtype=torch.float64)
    u = 0.01 * torch.randn(1, 4, 8, generator=generator, dtype=torch.float64)
    R = 1e-3 * torch.randn(1, 1, 8, generator=generator, dtype=torch.float64)

    def f():
        return (R * block(cls, u)).sum()

    errors = gradient_errors(f, dict(block.named_parameters()))
    assert set(errors) == {name for name, _ in block.named_parameters()}
    assert max(errors.values()) < 1e-4


def test_input_gradients():
    block = _block(SelfAttentionBlock, seed=4)
    u = torch.randn(1, 3, 8, dtype=torch.float64, requires_grad=True)

    def f():
        return block(u).pow(2).sum()

    assert finite_diff_check(f, {"u": u}) < 1e-4


def test_full_tiny_network(tiny_network, tiny_frames):
    def f():
        return tiny_network(tiny_frames, logits=True)

    errors = gradient_errors(f, dict(tiny_network.named_parameters()))
    assert len(errors) == len(list(tiny_network.parameters()))
    assert max(errors.values()) < 1e-4


def test_corrupted_gradient_is_detected():
    x = torch.randn(4, dtype=torch.float64, requires_grad=True)

    def f():
        return (x**3).sum()

    errors = gradient_errors(f, {"x": x}, corrupt=lambda name, g: g * 1.01)
    assert errors["x"] > 1e-3


def test_parameters_restored():
    x = torch.randn(5, dtype=torch.float64, requires_grad=True)
    before = x.detach().clone()
    finite_diff_check(lambda: (x.sin()).sum(), [x])
    assert torch.equal(x.detach(), before)


def test_requires_float64():
    x = torch.randn(3, dtype=torch.float32, requires_grad=True)
    with pytest.warns(UserWarning), pytest.raises(NumericError):
        finite_diff_check(lambda: x.sum(), [x])


def test_non_finite_objective():
    x = torch.ones(2, dtype=torch.float64, requires_grad=True)

    def f():
        return (x / (x - 1 - 1e-6)).log().sum()

    with pytest.raises(NumericError):
        finite_diff_check(f, [x])
