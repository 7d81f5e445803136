from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest
from pycavt import CavT
from pycavt.data import Metrics
from pycavt.training import TrainConfig
from sklearn.base import clone
from sklearn.exceptions import NotFittedError


@pytest.fixture
def model(tiny_config, tiny_sampling):
    return CavT(
        model_config=tiny_config,
        sampling=tiny_sampling,
        train_config=TrainConfig(learning_rate=1e-3, epochs=1, batch_size=4),
        quiet=True,
    )


def test_fit_predict(model, synth_videos):
    videos = synth_videos[:8]
    labels = [v.label for v in videos]
    model.fit(videos, labels)
    assert model.n_train_sequences_ == 16
    assert len(model.loss_log_) == 4
    y = model.predict(videos)
    assert y.shape == (8,)
    assert np.all((0 <= y) & (y <= 1))
    assert np.isfinite(model.score(videos, labels))
    metrics = model.evaluate(videos, labels)
    assert isinstance(metrics, Metrics)
    assert metrics.mse == pytest.approx(np.mean((y - labels) ** 2))


def test_fit_accepts_frame_arrays(model, synth_videos):
    frames = [v.video.frames for v in synth_videos[:4]]
    labels = [v.label for v in synth_videos[:4]]
    model.fit(frames, labels)
    assert model.predict(frames[0]).shape == (1,)
    with pytest.raises(ValueError):
        model.predict([frames[0].astype(float)])


def test_fit_with_validation(model, synth_videos):
    videos = synth_videos[:4]
    val = synth_videos[4:8]
    model.fit(videos, [v.label for v in videos], val=(val, [v.label for v in val]))
    assert len(model.loss_log_) == 2


def test_fit_errors(model, synth_videos):
    with pytest.raises(ValueError):
        model.fit(synth_videos[:4], [0.0, 1.0])
    with pytest.raises(ValueError):
        model.fit(synth_videos[:2], [0.0, 2.0])


def test_not_fitted(model, synth_videos, tmp_path):
    with pytest.raises(NotFittedError):
        model.predict(synth_videos[:1])
    with pytest.raises(NotFittedError):
        model.save(tmp_path / "model.cavp")


def test_save_load(model, synth_videos, tmp_path):
    videos = synth_videos[:4]
    model.fit(videos, [v.label for v in videos])
    path = tmp_path / "model.cavp"
    model.save(path)
    loaded = CavT.load(path, sampling=model.sampling)
    assert loaded.model_config == model.model_config
    assert loaded.loss_log_ == []
    np.testing.assert_array_equal(loaded.predict(videos), model.predict(videos))


def test_clone_keeps_settings(model):
    copy = clone(model)
    assert copy.get_params() == model.get_params()
    assert not hasattr(copy, "network_")


def test_model_drop_rate_is_used(tiny_config, tiny_sampling, synth_videos):
    model = CavT(
        model_config=replace(tiny_config, drop_rate=0.3),
        sampling=tiny_sampling,
        train_config=TrainConfig(learning_rate=1e-3, epochs=1, batch_size=4),
        quiet=True,
    )
    videos = synth_videos[:4]
    model.fit(videos, [v.label for v in videos])
    assert model.network_.config.drop_rate == 0.3
