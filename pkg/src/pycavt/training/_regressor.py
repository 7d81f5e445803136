"""Lightning wrappers around :class:`~pycavt.model.CavTNetwork`."""
from __future__ import annotations

import logging
import warnings

import lightning as L
import torch
from torch.utils.data import DataLoader

from ..data import evaluate
from ._adam import Adam
from ._losses import mse_loss
from ._stochastic_depth import stochastic_depth_plan

logger = logging.getLogger(__name__)


class EngagementRegressor(L.LightningModule):
    """Regress engagement intensity with stochastic depth and weighted MSE.

    Args:
        network (CavTNetwork): The model being trained.
        train_config (TrainConfig): Optimizer and loss settings. The
            stochastic-depth rate is the network's ``config.drop_rate``.

    Attributes:
        depth_generator (torch.Generator): Source of stochastic-depth
            decisions, seeded from ``train_config.seed + 1``.
    """

    def __init__(self, network, train_config):
        super().__init__()
        self.network = network
        self.train_config = train_config
        self.depth_generator = torch.Generator().manual_seed(train_config.seed + 1)
        self._val_outputs = []
        self._epoch_losses = []

    def forward(self, frames, plan=None):
        return self.network(frames, plan)

    def training_step(self, batch, batch_idx):
        frames, labels = batch
        cfg = self.network.config
        plan = stochastic_depth_plan(
            cfg.L1,
            cfg.L2,
            cfg.drop_rate,
            generator=self.depth_generator,
            batch_size=frames.shape[0],
        )
        predictions = self.network(frames, plan)
        loss = mse_loss(predictions, labels, self.train_config.class_weights)
        self.log("loss", loss, batch_size=frames.shape[0])
        self._epoch_losses.append(float(loss))
        return loss

    def on_train_epoch_end(self):
        if self._epoch_losses:
            logger.info(
                "epoch %d: mean loss %.6g over %d steps",
                self.current_epoch,
                sum(self._epoch_losses) / len(self._epoch_losses),
                len(self._epoch_losses),
            )
        self._epoch_losses = []

    def on_validation_epoch_start(self):
        self._val_outputs = []

    def validation_step(self, batch, batch_idx):
        frames, labels = batch
        self._val_outputs.append((self.network(frames), labels))

    def on_validation_epoch_end(self):
        predictions = torch.cat([y for y, _ in self._val_outputs])
        labels = torch.cat([label for _, label in self._val_outputs])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            metrics = evaluate(predictions.cpu().numpy(), labels.cpu().numpy())
        self.log("val_mse", metrics.mse)
        self.log("val_mmse", metrics.mmse)
        logger.info(
            "epoch %d: val_mse %.6g val_mmse %.6g",
            self.current_epoch,
            metrics.mse,
            metrics.mmse,
        )

    def configure_optimizers(self):
        cfg = self.train_config
        return Adam(
            self.network.parameters(),
            lr=cfg.learning_rate,
            betas=(cfg.adam_beta1, cfg.adam_beta2),
            eps=cfg.adam_eps,
        )


def sequence_loader(dataset, batch_size, shuffle=False, seed=0, num_workers=0):
    """Mini-batches of BorS sequences.

    Shuffled loaders draw a new order every epoch from a generator seeded
    with ``seed``, so the batch order is fixed by the seed alone.
    """
    generator = torch.Generator().manual_seed(seed) if shuffle else None
    return DataLoader(
        dataset,
        batch_size,
        shuffle=shuffle,
        generator=generator,
        num_workers=num_workers,
        persistent_workers=num_workers > 0,
    )


class LossLogCallback(L.Callback):
    """Collect ``(epoch, step, loss)`` after every optimizer step."""

    def __init__(self):
        super().__init__()
        self.records = []

    def on_train_batch_end(self, trainer, pl_module, outputs, batch, batch_idx):
        loss = outputs["loss"] if isinstance(outputs, dict) else outputs
        self.records.append((trainer.current_epoch, trainer.global_step, float(loss)))
