"""Label manifests and prediction files.

A label manifest has one ``video_id,relative_path,label`` line per video;
a prediction file one ``video_id,y`` line. Lines starting with ``#`` are
comments in both.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from ..common import validate_labels
from ._packed import PackedVideo
from ._packed import read_packed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledVideo:
    """A video and its engagement intensity in [0, 1]."""

    video: PackedVideo
    label: float

    def __post_init__(self):
        object.__setattr__(self, "label", float(validate_labels([self.label])[0]))

    @property
    def video_id(self):
        return self.video.video_id


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    path: str
    label: float


def _rows(path, width):
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != width:
            raise ValueError(
                f"{path}:{number}: expected {width} comma-separated fields, "
                f"got {len(parts)}"
            )
        yield number, parts


def read_manifest(path):
    """Parse a label manifest into :class:`ManifestEntry` records."""
    entries = []
    for number, (video_id, rel, label) in _rows(path, 3):
        try:
            value = float(label)
        except ValueError as error:
            raise ValueError(f"{path}:{number}: bad label {label!r}") from error
        if not 0 <= value <= 1:
            raise ValueError(f"{path}:{number}: label {value} outside [0, 1]")
        entries.append(ManifestEntry(video_id, rel, value))
    return entries


def write_manifest(path, entries):
    lines = ["# video_id,relative_path,label"]
    lines += [f"{e.video_id},{e.path},{e.label!r}" for e in entries]
    Path(path).write_text("\n".join(lines) + "\n")


def load_labeled_videos(path):
    """Read a manifest and every packed video it names.

    Relative paths resolve against the manifest's directory.

    Returns:
        list of LabeledVideo: In manifest order.
    """
    root = Path(path).parent
    videos = [
        LabeledVideo(read_packed(root / e.path, video_id=e.video_id), e.label)
        for e in read_manifest(path)
    ]
    logger.info("loaded %d videos from %s", len(videos), path)
    return videos


def read_predictions(path):
    """Parse ``video_id,y`` lines into a ``{video_id: y}`` dict."""
    return {video_id: float(y) for _, (video_id, y) in _rows(path, 2)}


def format_predictions(video_ids, predictions):
    return [f"{video_id},{float(y)!r}" for video_id, y in zip(video_ids, predictions)]
