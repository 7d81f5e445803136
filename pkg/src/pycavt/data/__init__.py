from __future__ import annotations

from ._dataset import sequence_frames
from ._dataset import SequenceDataset
from ._manifest import format_predictions
from ._manifest import LabeledVideo
from ._manifest import load_labeled_videos
from ._manifest import ManifestEntry
from ._manifest import read_manifest
from ._manifest import read_predictions
from ._manifest import write_manifest
from ._metrics import evaluate
from ._metrics import Metrics
from ._packed import PackedVideo
from ._packed import read_packed
from ._packed import write_packed
from ._synthetic import synth_dataset

__all__ = [
    "LabeledVideo",
    "ManifestEntry",
    "Metrics",
    "PackedVideo",
    "SequenceDataset",
    "evaluate",
    "format_predictions",
    "load_labeled_videos",
    "read_manifest",
    "read_packed",
    "read_predictions",
    "sequence_frames",
    "synth_dataset",
    "write_manifest",
    "write_packed",
]
