"""Estimator front end for engagement intensity regression."""
from __future__ import annotations

from warnings import catch_warnings
from warnings import filterwarnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.base import RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .bors import SamplingParams
from .common import validate_labels
from .common import validate_video
from .data import evaluate
from .data import LabeledVideo
from .data import PackedVideo
from .model import CavTConfig
from .model import load_checkpoint
from .model import write_checkpoint
from .training import predict_many
from .training import train
from .training import TrainConfig


def _as_videos(x):
    if isinstance(x, (PackedVideo, LabeledVideo, np.ndarray)):
        x = [x]
    videos = []
    for i, item in enumerate(x):
        if isinstance(item, LabeledVideo):
            item = item.video
        if not isinstance(item, PackedVideo):
            frames = validate_video(np.asarray(item))
            if frames.dtype != np.uint8:
                raise ValueError("raw frames must be 8-bit; wrap them in PackedVideo")
            item = PackedVideo(f"video_{i:04d}", frames)
        videos.append(item)
    return videos


class CavT(BaseEstimator, RegressorMixin):
    """Class-attention video transformer trained on BorS sequences.

    Each training video contributes ``sampling.r`` frame sequences, all
    labeled with the video's engagement intensity. Prediction feeds the
    first sequence of each video to the network.

    Args:
        model_config: CavTConfig, optional (default: ``CavTConfig()``)
            Network shape.

        sampling: SamplingParams, optional
            BorS settings. Defaults to ``SamplingParams(T=model_config.T)``.

        train_config: TrainConfig, optional (default: ``TrainConfig()``)
            Optimization settings, including the seed.

        quiet: boolean, optional (default: False)
            Whether or not warnings should be silenced during fitting.

    Attributes:
        network_: CavTNetwork
            The trained network, in eval mode.

        loss_log_: list of (int, int, float)
            ``(epoch, step, loss)`` after every optimizer step.

        n_train_sequences_: int
            Size of the augmented training set, ``r`` times the number of
            training videos.

    Examples:
        >>> from pycavt import CavT
        >>> from pycavt.data import synth_dataset
        >>> data = synth_dataset(4, n_frames=8, H=8, W=8)
        >>> model = CavT().fit(data, [v.label for v in data])
        >>> y = model.predict(data)
    """

    def __init__(
        self, model_config=None, sampling=None, train_config=None, quiet=False
    ):
        self.model_config = model_config
        self.sampling = sampling
        self.train_config = train_config
        self.quiet = quiet

    def _settings(self):
        model_config = self.model_config or CavTConfig()
        sampling = self.sampling or SamplingParams(T=model_config.T)
        return model_config, sampling, self.train_config or TrainConfig()

    def fit(self, x, y, val=None):
        """Train on videos ``x`` with engagement labels ``y``.

        Args:
            x (list of PackedVideo or np.ndarray): Training videos; arrays are
                8-bit frame stacks of shape (n, H, W, 3).
            y (array-like): Labels in [0, 1], one per video.
            val (tuple, optional): ``(videos, labels)`` scored after every
                epoch.

        Returns:
            self: Returns a fit ``CavT`` instance.
        """
        videos = _as_videos(x)
        labels = validate_labels(y)
        if len(videos) != len(labels):
            raise ValueError(f"{len(videos)} videos but {len(labels)} labels")
        model_config, sampling, train_config = self._settings()
        val_videos = None
        if val is not None:
            val_videos = [
                LabeledVideo(v, label)
                for v, label in zip(_as_videos(val[0]), validate_labels(val[1]))
            ]

        action = "ignore" if self.quiet else "default"
        with catch_warnings():
            filterwarnings(action, category=UserWarning)
            self.network_, self.loss_log_ = train(
                [LabeledVideo(v, label) for v, label in zip(videos, labels)],
                sampling,
                model_config,
                train_config,
                val_videos=val_videos,
            )
        self.n_train_sequences_ = sampling.r * len(videos)
        return self

    def predict(self, x):
        """Engagement intensity of every video from its first sequence.

        Args:
            x (list of PackedVideo or np.ndarray): Videos.

        Returns:
            np.ndarray: Intensities in [0, 1], one per video.
        """
        check_is_fitted(self, "network_")
        _, sampling, train_config = self._settings()
        return predict_many(
            _as_videos(x), sampling, self.network_, seed=train_config.seed
        )

    def evaluate(self, x, y):
        """MSE, per-level MSE and MMSE of the predictions on ``x``.

        Returns:
            Metrics: The scores.
        """
        return evaluate(self.predict(x), y)

    def save(self, path):
        """Write the trained network as a checkpoint."""
        check_is_fitted(self, "network_")
        write_checkpoint(path, self.network_)
        return self

    @classmethod
    def load(cls, path, sampling=None, train_config=None):
        """Rebuild an estimator around a saved network.

        The network's configuration comes from the checkpoint; ``loss_log_``
        is empty and ``n_train_sequences_`` is 0.
        """
        network = load_checkpoint(path)
        model = cls(
            model_config=network.config, sampling=sampling, train_config=train_config
        )
        model.network_ = network
        model.loss_log_ = []
        model.n_train_sequences_ = 0
        return model
