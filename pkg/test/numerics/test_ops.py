"""Tests for pycavt.numerics tensor operations and backward."""
from __future__ import annotations

import numpy as np
import pytest
import torch
from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal
from pycavt.common import ContractError
from pycavt.common import DimensionError
from pycavt.common import NumericError
from pycavt.numerics import as_tensor
from pycavt.numerics import backward
from pycavt.numerics import gelu
from pycavt.numerics import layer_norm
from pycavt.numerics import LN_EPS
from pycavt.numerics import matmul
from pycavt.numerics import softmax_lastdim
from pycavt.numerics import zero_grad
from scipy.special import ndtr


def triple_loop(a, b):
    m, n = a.shape
    p = b.shape[1]
    out = np.zeros((m, p))
    for i in range(m):
        for j in range(p):
            for k in range(n):
                out[i, j] += a[i, k] * b[k, j]
    return out


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([[1, 0], [0, 1]], [[3, 4], [5, 6]], [[3, 4], [5, 6]]),
        ([[1, 2]], [[3], [4]], [[11]]),
    ],
)
def test_matmul_examples(a, b, expected):
    assert_array_equal(matmul(as_tensor(a), as_tensor(b)).numpy(), expected)


def test_matmul_matches_triple_loop():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a = rng.uniform(-1, 1, (5, 7))
        b = rng.uniform(-1, 1, (7, 3))
        assert_allclose(
            matmul(as_tensor(a), as_tensor(b)).numpy(), triple_loop(a, b), rtol=1e-12
        )


def test_matmul_batched_and_shared_weight():
    a = torch.randn(2, 3, 5, 4, dtype=torch.float64)
    w = torch.randn(4, 6, dtype=torch.float64)
    assert matmul(a, w).shape == (2, 3, 5, 6)
    b = torch.randn(2, 3, 4, 6, dtype=torch.float64)
    assert matmul(a, b).shape == (2, 3, 5, 6)


def test_matmul_shape_errors_name_both_shapes():
    with pytest.raises(DimensionError, match=r"\(2, 3\).*\(4, 5\)"):
        matmul(torch.zeros(2, 3), torch.zeros(4, 5))
    with pytest.raises(DimensionError):
        matmul(torch.zeros(2, 2, 3), torch.zeros(3, 3, 3))
    with pytest.raises(DimensionError):
        matmul(torch.zeros(3), torch.zeros(3, 1))


def test_matmul_non_finite():
    a = as_tensor([[float("inf"), 1.0]])
    with pytest.raises(NumericError):
        matmul(a, as_tensor([[1.0], [1.0]]))


def test_softmax_examples():
    assert_allclose(softmax_lastdim(as_tensor([0, 0, 0])).numpy(), [1 / 3] * 3)
    assert_allclose(
        softmax_lastdim(as_tensor([1000.0, 0.0])).numpy(), [1.0, 0.0], atol=1e-12
    )
    assert_allclose(
        softmax_lastdim(as_tensor([1.0, 2.0, 3.0])).numpy(),
        [0.09003057, 0.24472847, 0.66524096],
        atol=1e-8,
    )


def test_softmax_rows_and_shift_invariance():
    x = torch.randn(6, 9, dtype=torch.float64) * 5
    s = softmax_lastdim(x)
    assert_allclose(s.sum(-1).numpy(), np.ones(6), atol=1e-9)
    assert bool((s >= 0).all())
    assert_allclose(softmax_lastdim(x + 7.5).numpy(), s.numpy(), atol=1e-12)


def test_softmax_empty():
    with pytest.raises(DimensionError):
        softmax_lastdim(torch.zeros(3, 0))


def test_layer_norm_examples():
    ones = torch.ones(4, dtype=torch.float64)
    zeros = torch.zeros(4, dtype=torch.float64)
    assert_allclose(layer_norm(as_tensor([[5, 5, 5, 5]]), ones, zeros).numpy(), 0.0)

    out = layer_norm(as_tensor([[1, -1]]), ones[:2], zeros[:2]).numpy()
    assert_allclose(out, [[1 / np.sqrt(1 + LN_EPS), -1 / np.sqrt(1 + LN_EPS)]])

    bias = as_tensor([0.5, -2.0, 3.0])
    zero_gain = torch.zeros(3, dtype=torch.float64)
    out = layer_norm(torch.randn(5, 3, dtype=torch.float64), zero_gain, bias)
    assert_allclose(out.numpy(), np.tile(bias.numpy(), (5, 1)))


def test_layer_norm_statistics():
    x = torch.randn(10, 32, dtype=torch.float64) * 3 + 2
    gain = torch.ones(32, dtype=torch.float64)
    bias = torch.zeros(32, dtype=torch.float64)
    out = layer_norm(x, gain, bias).numpy()
    assert np.abs(out.mean(-1)).max() < 1e-9
    assert np.abs(out.var(-1) - 1).max() < 1e-6


def test_layer_norm_errors():
    with pytest.raises(DimensionError):
        layer_norm(torch.zeros(2, 0), torch.zeros(0), torch.zeros(0))
    with pytest.raises(DimensionError):
        layer_norm(torch.zeros(2, 3), torch.ones(4), torch.zeros(4))


def test_gelu_values():
    x = as_tensor([0.0, 1.0, 12.0, -0.7, 2.3])
    expected = x.numpy() * ndtr(x.numpy())
    assert_allclose(gelu(x).numpy(), expected, rtol=1e-12)
    assert float(gelu(as_tensor([1.0]))) == pytest.approx(0.8413447461, abs=1e-10)
    assert abs(float(gelu(as_tensor([12.0]))) - 12.0) < 1e-9
    assert float(gelu(as_tensor([0.0]))) == 0.0


def test_backward_sum_gives_ones():
    W = torch.randn(3, 4, dtype=torch.float64, requires_grad=True)
    backward(W.sum())
    assert_array_equal(W.grad.numpy(), np.ones((3, 4)))


def test_backward_squared_matmul():
    x = torch.randn(5, 3, dtype=torch.float64)
    W = torch.randn(3, 2, dtype=torch.float64, requires_grad=True)
    (grad,) = backward((matmul(x, W) ** 2).sum(), inputs=[W])
    expected = 2 * x.T @ (x @ W.detach())
    assert_allclose(grad.numpy(), expected.numpy(), rtol=1e-12)


def test_backward_contract():
    W = torch.randn(3, dtype=torch.float64, requires_grad=True)
    with pytest.raises(ContractError):
        backward(W * 2)
    with pytest.raises(ContractError):
        backward(torch.tensor(1.0))

    root = (W * W).sum()
    backward(root)
    with pytest.raises(ContractError):
        backward(root)


def test_zero_grad():
    W = torch.randn(3, dtype=torch.float64, requires_grad=True)
    backward(W.sum())
    zero_grad([W])
    assert W.grad is None
    backward((2 * W).sum())
    assert_array_equal(W.grad.numpy(), [2.0, 2.0, 2.0])
