"""Seeded synthetic engagement videos with a learnable brightness signal."""
from __future__ import annotations

import numpy as np

from ..common import ENGAGEMENT_LEVELS
from ._manifest import LabeledVideo
from ._packed import PackedVideo

# texture amplitude in gray levels; shrunk near 0 and 255 to avoid clipping
TEXTURE_AMPLITUDE = 24


def _video(label, n, H, W, rng):
    base = 255.0 * label
    amplitude = min(TEXTURE_AMPLITUDE, base, 255.0 - base)
    yy, xx = np.mgrid[0:H, 0:W]
    checker = np.where((yy + xx) % 2 == 0, 1.0, -1.0)
    # zero spatial mean and peak 1, also when H * W is odd
    checker -= checker.mean()
    peak = np.abs(checker).max()
    if peak > 0:
        checker /= peak
    phase = rng.integers(0, 2, size=n)
    signs = np.where(phase == 0, 1.0, -1.0)[:, None, None]
    frames = base + amplitude * signs * checker[None]
    frames = np.repeat(frames[..., None], 3, axis=-1)
    return np.clip(np.rint(frames), 0, 255).astype(np.uint8)


def synth_dataset(count, n_frames, H, W, seed=0):
    """Generate ``count`` labeled videos.

    Each video is a checkerboard texture that flips per frame around a flat
    brightness of ``255 * label``, so the mean pixel over the video stays
    within rounding of ``255 * label``. Labels cycle through the four
    engagement levels in a seeded order, so every level appears when
    ``count >= 4``.

    Args:
        count (int): Number of videos.
        n_frames (int or tuple of int): Frames per video, or an inclusive
            ``(low, high)`` range drawn per video.
        H (int): Frame height.
        W (int): Frame width.
        seed (int): Seed of every random choice.

    Returns:
        list of LabeledVideo: Videos with ids ``synth_0000`` onwards.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    levels = np.resize(np.array(ENGAGEMENT_LEVELS), count)
    rng.shuffle(levels)
    out = []
    for i, label in enumerate(levels):
        if isinstance(n_frames, tuple):
            n = int(rng.integers(n_frames[0], n_frames[1] + 1))
        else:
            n = int(n_frames)
        frames = _video(float(label), n, H, W, rng)
        out.append(LabeledVideo(PackedVideo(f"synth_{i:04d}", frames), float(label)))
    return out
