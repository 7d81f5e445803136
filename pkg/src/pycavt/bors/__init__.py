from __future__ import annotations

from ._bors import downsample
from ._bors import format_manifest
from ._bors import generate_sequences
from ._bors import OrderMode
from ._bors import plan_windows
from ._bors import random_sequences
from ._bors import representatives
from ._bors import sample_video
from ._bors import SamplingParams
from ._bors import sequence_budget
from ._bors import SequenceSet
from ._bors import WindowPlan

__all__ = [
    "OrderMode",
    "SamplingParams",
    "SequenceSet",
    "WindowPlan",
    "downsample",
    "format_manifest",
    "generate_sequences",
    "plan_windows",
    "random_sequences",
    "representatives",
    "sample_video",
    "sequence_budget",
]
