from __future__ import annotations

from ._adam import Adam
from ._adam import adam_step
from ._adam import OptimizerState
from ._config import TrainConfig
from ._loop import check_videos
from ._loop import format_loss_log
from ._loop import predict
from ._loop import predict_many
from ._loop import train
from ._loop import write_loss_log
from ._losses import level_weights
from ._losses import mse_loss
from ._regressor import EngagementRegressor
from ._regressor import LossLogCallback
from ._regressor import sequence_loader
from ._stochastic_depth import DepthPlan
from ._stochastic_depth import stochastic_depth_plan

__all__ = [
    "Adam",
    "DepthPlan",
    "EngagementRegressor",
    "LossLogCallback",
    "OptimizerState",
    "TrainConfig",
    "adam_step",
    "check_videos",
    "format_loss_log",
    "level_weights",
    "mse_loss",
    "predict",
    "predict_many",
    "sequence_loader",
    "stochastic_depth_plan",
    "train",
    "write_loss_log",
]
