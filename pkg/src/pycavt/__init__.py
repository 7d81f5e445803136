from __future__ import annotations

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    pass

from .cavt import CavT


__all__ = [
    "CavT",
    "bors",
    "common",
    "data",
    "model",
    "numerics",
    "training",
]
