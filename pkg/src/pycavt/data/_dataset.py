"""Torch datasets over BorS sequences of labeled videos."""
from __future__ import annotations

import logging

import numpy as np
import torch
from torch.utils.data import Dataset

from ..bors import sample_video
from ..numerics import as_tensor

logger = logging.getLogger(__name__)


def sequence_frames(video, indices, dtype=torch.float64):
    """Frames at 1-based ``indices`` scaled to [0, 1], shape (T, H, W, C)."""
    return as_tensor(video.select(indices).astype(np.float64) / 255.0, dtype)


class SequenceDataset(Dataset):
    """Every BorS sequence of every video, each carrying its video's label.

    Args:
        videos (list of LabeledVideo): Source videos.
        sampling (SamplingParams): Sampler settings; ``r`` sequences per
            video.
        seed (int): Seed for random representative election.
        dtype (torch.dtype): Dtype of the returned frames and labels.

    Items are ``(frames, label)`` with frames of shape (T, H, W, C).
    """

    def __init__(self, videos, sampling, seed=0, dtype=torch.float64):
        self.videos = list(videos)
        self.sampling = sampling
        self.dtype = dtype
        self.items = []
        for index, labeled in enumerate(self.videos):
            sequences = sample_video(labeled.video.n, sampling, seed=seed + index)
            self.items += [(index, seq) for seq in sequences.sequences]
        logger.info(
            "%d sequences from %d videos (r=%d)",
            len(self.items),
            len(self.videos),
            sampling.r,
        )

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        index, seq = self.items[i]
        labeled = self.videos[index]
        frames = sequence_frames(labeled.video, seq, self.dtype)
        return frames, torch.tensor(labeled.label, dtype=self.dtype)
