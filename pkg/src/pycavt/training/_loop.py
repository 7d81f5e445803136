"""Training on BorS-augmented data and first-sequence prediction."""
from __future__ import annotations

import logging
import warnings
from dataclasses import replace
from pathlib import Path

import lightning as L
import numpy as np
import torch

from ..bors import sample_video
from ..common import DimensionError
from ..common import ExhaustedWindowError
from ..common import InsufficientFramesError
from ..data import sequence_frames
from ..data import SequenceDataset
from ..model import build_network
from ._regressor import EngagementRegressor
from ._regressor import LossLogCallback
from ._regressor import sequence_loader

logger = logging.getLogger(__name__)

_QUIET = (
    ".*does not have many workers.*",
    ".*validation_step.*",
    ".*val_dataloader.*",
    ".*smaller than the logging interval.*",
)


def check_videos(videos, sampling, model_config):
    """Reject, by id, any video the sampler or the network cannot take."""
    for labeled in videos:
        video = labeled.video
        try:
            sample_video(video.n, sampling)
        except (InsufficientFramesError, ExhaustedWindowError) as error:
            raise type(error)(f"video {video.video_id}: {error}") from error
        _, H, W, C = video.shape
        if (H, W, C) != (model_config.H, model_config.W, 3):
            raise DimensionError(
                f"video {video.video_id}: frames are {H}x{W}x{C}; the model "
                f"expects {model_config.H}x{model_config.W}x3"
            )


def train(videos, sampling, model_config, train_config, val_videos=None):
    """Train a CavT network on every BorS sequence of ``videos``.

    Each video contributes ``sampling.r`` sequences, all carrying the
    video's label. Sequences are shuffled every epoch and fed in
    mini-batches to Adam. Every random choice derives from
    ``train_config.seed``: network initialization, the shuffling order and
    the stochastic-depth decisions.

    Args:
        videos (list of LabeledVideo): Training videos.
        sampling (SamplingParams): BorS settings; ``sampling.T`` must equal
            ``model_config.T``.
        model_config (CavTConfig): Network shape and stochastic-depth rate.
        train_config (TrainConfig): Optimization settings; a set
            ``drop_rate`` overrides the one in ``model_config``.
        val_videos (list of LabeledVideo, optional): Scored on their first
            sequence after every epoch, logging ``val_mse`` and ``val_mmse``.

    Returns:
        tuple: The trained network, in eval mode, and the loss log as a list
        of ``(epoch, step, loss)`` tuples.
    """
    if sampling.T != model_config.T:
        raise DimensionError(
            f"sampling.T = {sampling.T} but the model takes T = {model_config.T}"
        )
    if not videos:
        raise ValueError("train needs at least one video")
    check_videos(videos, sampling, model_config)
    if train_config.drop_rate is not None:
        model_config = replace(model_config, drop_rate=train_config.drop_rate)
    dtype = train_config.torch_dtype
    L.seed_everything(train_config.seed, workers=True)
    network = build_network(model_config, seed=train_config.seed, dtype=dtype)
    dataset = SequenceDataset(videos, sampling, seed=train_config.seed, dtype=dtype)
    if train_config.epochs == 0 or train_config.max_steps == 0:
        logger.info("no epochs requested; returning the initialization")
        return network.eval(), []

    val_loader = None
    if val_videos:
        check_videos(val_videos, sampling, model_config)
        val_set = SequenceDataset(
            val_videos, replace(sampling, r=1), seed=train_config.seed, dtype=dtype
        )
        val_loader = sequence_loader(
            val_set, train_config.batch_size, num_workers=train_config.num_workers
        )
    train_loader = sequence_loader(
        dataset,
        train_config.batch_size,
        shuffle=True,
        seed=train_config.seed,
        num_workers=train_config.num_workers,
    )

    module = EngagementRegressor(network, train_config)
    loss_log = LossLogCallback()
    trainer = L.Trainer(
        accelerator="cpu",
        devices=1,
        precision="64-true" if dtype == torch.float64 else "32-true",
        max_epochs=train_config.epochs,
        max_steps=train_config.max_steps,
        deterministic=True,
        logger=False,
        enable_checkpointing=False,
        enable_progress_bar=False,
        enable_model_summary=False,
        num_sanity_val_steps=0,
        callbacks=[loss_log],
    )
    logger.info(
        "training on %d sequences from %d videos for %d epochs",
        len(dataset),
        len(videos),
        train_config.epochs,
    )
    with warnings.catch_warnings():
        for pattern in _QUIET:
            warnings.filterwarnings("ignore", message=pattern)
        trainer.fit(module, train_dataloaders=train_loader, val_dataloaders=val_loader)
    return network.eval(), loss_log.records


def predict(video, sampling, network, seed=0):
    """Predict engagement from the video's first BorS sequence ``S^1``.

    Args:
        video (PackedVideo): The video.
        sampling (SamplingParams): BorS settings; ``r`` is ignored.
        network (CavTNetwork): Model, run in eval mode.
        seed (int): Seed of random-order election.

    Returns:
        float: Intensity in [0, 1].
    """
    first = sample_video(video.n, replace(sampling, r=1), seed=seed).first
    dtype = next(network.parameters()).dtype
    was_training = network.training
    network.eval()
    try:
        with torch.no_grad():
            y = network(sequence_frames(video, first, dtype))
    finally:
        network.train(was_training)
    return float(y)


def predict_many(videos, sampling, network, seed=0):
    """:func:`predict` for every video, as an array."""
    return np.array([predict(video, sampling, network, seed) for video in videos])


def format_loss_log(records):
    return ["# epoch,step,loss"] + [
        f"{epoch},{step},{loss!r}" for epoch, step, loss in records
    ]


def write_loss_log(path, records):
    Path(path).write_text("\n".join(format_loss_log(records)) + "\n")
