"""Packed video container.

Layout, integers little-endian u32: magic ``b"CAVF"``, version, n, H, W, C,
then ``n * H * W * C`` bytes, frame-major, then row-major, with channels
interleaved.
"""
from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..common import DimensionError
from ..common import PackedFormatError

logger = logging.getLogger(__name__)

MAGIC = b"CAVF"
VERSION = 1
_HEADER = struct.Struct("<4sIIIII")


@dataclass(frozen=True, eq=False)
class PackedVideo:
    """Frames of one video as 8-bit pixels.

    Args:
        video_id (str): Identifier used in manifests and outputs.
        frames (np.ndarray): ``uint8`` array of shape (n, H, W, C).
    """

    video_id: str
    frames: np.ndarray

    def __post_init__(self):
        frames = np.ascontiguousarray(self.frames)
        if frames.dtype != np.uint8:
            raise TypeError(f"frames must be uint8; got {frames.dtype}")
        if frames.ndim != 4 or frames.shape[0] < 1:
            raise DimensionError(
                f"frames must have shape (n >= 1, H, W, C); got {frames.shape}"
            )
        object.__setattr__(self, "frames", frames)

    @property
    def n(self):
        return self.frames.shape[0]

    @property
    def shape(self):
        """``(n, H, W, C)``."""
        return self.frames.shape

    def __eq__(self, other):
        if not isinstance(other, PackedVideo):
            return NotImplemented
        return self.video_id == other.video_id and np.array_equal(
            self.frames, other.frames
        )

    def select(self, indices):
        """Frames at 1-based ``indices``, as an array (len(indices), H, W, C)."""
        return self.frames[np.asarray(indices, dtype=np.int64) - 1]


def write_packed(video, dest):
    """Write ``video`` to a path or a binary stream."""
    n, H, W, C = video.shape
    payload = _HEADER.pack(MAGIC, VERSION, n, H, W, C) + video.frames.tobytes()
    if isinstance(dest, (str, Path)):
        Path(dest).write_bytes(payload)
        logger.debug("wrote %s: %d frames of %dx%dx%d", dest, n, H, W, C)
    else:
        dest.write(payload)


def read_packed(source, video_id=None):
    """Read a packed video.

    Args:
        source (str, Path or binary stream): The file.
        video_id (str, optional): Identifier; defaults to the file stem, or
            ``"video"`` for streams.

    Returns:
        PackedVideo: The decoded video.
    """
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
        video_id = video_id or Path(source).stem
    else:
        data = source.read()
        video_id = video_id or "video"
    if len(data) < 4 or data[:4] != MAGIC:
        raise PackedFormatError("not a packed video: bad magic", 0)
    if len(data) < _HEADER.size:
        raise PackedFormatError("truncated header", len(data))
    _, version, n, H, W, C = _HEADER.unpack_from(data)
    if version != VERSION:
        raise PackedFormatError(f"unsupported packed video version {version}", 4)
    if min(n, H, W, C) < 1:
        raise PackedFormatError(f"zero dimension in ({n}, {H}, {W}, {C})", 8)
    size = n * H * W * C
    remaining = len(data) - _HEADER.size
    if size > remaining:
        raise PackedFormatError(
            f"payload declares {n}x{H}x{W}x{C} = {size} bytes but only "
            f"{remaining} remain",
            _HEADER.size,
        )
    if size < remaining:
        raise PackedFormatError("trailing bytes after payload", _HEADER.size + size)
    frames = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    return PackedVideo(video_id, frames.reshape(n, H, W, C).copy())
