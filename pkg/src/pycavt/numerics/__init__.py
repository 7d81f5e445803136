from __future__ import annotations

from ._gradcheck import finite_diff_check
from ._gradcheck import gradient_errors
from ._ops import as_tensor
from ._ops import backward
from ._ops import gelu
from ._ops import layer_norm
from ._ops import LN_EPS
from ._ops import matmul
from ._ops import softmax_lastdim
from ._ops import zero_grad

__all__ = [
    "LN_EPS",
    "as_tensor",
    "backward",
    "finite_diff_check",
    "gelu",
    "gradient_errors",
    "layer_norm",
    "matmul",
    "softmax_lastdim",
    "zero_grad",
]
