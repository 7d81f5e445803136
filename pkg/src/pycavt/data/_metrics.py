"""MSE and the class-balanced MMSE."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from sklearn.metrics import mean_squared_error

from ..common import ENGAGEMENT_LEVELS
from ..common import match_level
from ..common import validate_labels


@dataclass(frozen=True)
class Metrics:
    """Evaluation summary.

    Attributes:
        mse (float): Mean squared error over all samples.
        per_level_mse (dict): Level to MSE, for levels with samples.
        mmse (float): Mean of ``per_level_mse`` values.
        absent_levels (tuple): Engagement levels without samples.
    """

    mse: float
    per_level_mse: dict = field(hash=False)
    mmse: float
    absent_levels: tuple = ()

    def lines(self):
        """``mse=...``, ``mmse=...`` and one ``mse[level]=...`` line per level."""
        out = [f"mse={self.mse:.6g}", f"mmse={self.mmse:.6g}"]
        out += [f"mse[{level:g}]={v:.6g}" for level, v in self.per_level_mse.items()]
        out += [f"absent={level:g}" for level in self.absent_levels]
        return out


def _group(labels):
    levels = [match_level(label, ENGAGEMENT_LEVELS) for label in labels]
    if all(level is not None for level in levels):
        absent = tuple(lv for lv in ENGAGEMENT_LEVELS if lv not in set(levels))
        return np.array(levels), absent
    return labels, ()


def evaluate(predictions, labels):
    """Score predictions against engagement labels.

    Samples are grouped by engagement level when every label is one of
    0, 0.33, 0.66 and 1, otherwise by distinct label value. Levels without
    samples are left out of the MMSE and reported.

    Args:
        predictions (array-like): Predicted intensities.
        labels (array-like): True intensities in [0, 1].

    Returns:
        Metrics: The scores.
    """
    predictions = np.asarray(predictions, dtype=float).ravel()
    labels = validate_labels(labels)
    if predictions.shape != labels.shape:
        raise ValueError(
            f"{predictions.size} predictions for {labels.size} labels"
        )
    groups, absent = _group(labels)
    per_level = {}
    for level in np.unique(groups):
        mask = groups == level
        per_level[float(level)] = float(
            mean_squared_error(labels[mask], predictions[mask])
        )
    if absent:
        warnings.warn(
            "MMSE computed without levels "
            + ", ".join(f"{lv:g}" for lv in absent)
            + " (no samples)"
        )
    return Metrics(
        mse=float(mean_squared_error(labels, predictions)),
        per_level_mse=per_level,
        mmse=float(np.mean(list(per_level.values()))),
        absent_levels=absent,
    )
