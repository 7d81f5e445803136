"""Tests for pycavt.data: packed videos, manifests, synthetic data, metrics."""
from __future__ import annotations

import io
import struct

import numpy as np
import pytest
import torch
from numpy.testing import assert_allclose
from pycavt.bors import SamplingParams
from pycavt.common import DimensionError
from pycavt.common import PackedFormatError
from pycavt.data import evaluate
from pycavt.data import format_predictions
from pycavt.data import LabeledVideo
from pycavt.data import load_labeled_videos
from pycavt.data import ManifestEntry
from pycavt.data import PackedVideo
from pycavt.data import read_manifest
from pycavt.data import read_packed
from pycavt.data import read_predictions
from pycavt.data import sequence_frames
from pycavt.data import SequenceDataset
from pycavt.data import synth_dataset
from pycavt.data import write_manifest
from pycavt.data import write_packed


@pytest.fixture
def random_video():
    rng = np.random.default_rng(0)
    frames = rng.integers(0, 256, size=(5, 6, 4, 3), dtype=np.uint8)
    frames[0, 0, 0] = [0, 255, 0]
    return PackedVideo("clip", frames)


def _packed_bytes(video):
    buffer = io.BytesIO()
    write_packed(video, buffer)
    return buffer.getvalue()


def test_packed_round_trip(tmp_path, random_video):
    path = tmp_path / "clip.cavf"
    write_packed(random_video, path)
    assert read_packed(path) == random_video
    assert read_packed(io.BytesIO(_packed_bytes(random_video)), "clip") == random_video


def test_packed_layout(random_video):
    data = _packed_bytes(random_video)
    assert data[:4] == b"CAVF"
    assert struct.unpack_from("<IIIII", data, 4) == (1, 5, 6, 4, 3)
    assert len(data) == 24 + 5 * 6 * 4 * 3
    assert data[24:27] == bytes([0, 255, 0])


def test_packed_bad_magic(random_video):
    data = b"RIFF" + _packed_bytes(random_video)[4:]
    with pytest.raises(PackedFormatError) as info:
        read_packed(io.BytesIO(data))
    assert info.value.offset == 0


def test_packed_truncated(random_video):
    data = _packed_bytes(random_video)
    with pytest.raises(PackedFormatError, match="only"):
        read_packed(io.BytesIO(data[:-1]))
    with pytest.raises(PackedFormatError):
        read_packed(io.BytesIO(data[:10]))
    with pytest.raises(PackedFormatError, match="trailing"):
        read_packed(io.BytesIO(data + b"\x01"))


def test_packed_overflowing_dimensions():
    header = struct.pack("<4sIIIII", b"CAVF", 1, 70000, 70000, 70000, 3)
    with pytest.raises(PackedFormatError) as info:
        read_packed(io.BytesIO(header + b"\x00" * 16))
    assert info.value.offset == 24


def test_packed_video_validation():
    with pytest.raises(TypeError):
        PackedVideo("x", np.zeros((2, 4, 4, 3)))
    with pytest.raises(DimensionError):
        PackedVideo("x", np.zeros((0, 4, 4, 3), dtype=np.uint8))


def test_select_is_one_based(random_video):
    assert np.array_equal(random_video.select([1, 5]), random_video.frames[[0, 4]])


def test_labeled_video_range(random_video):
    with pytest.raises(ValueError):
        LabeledVideo(random_video, 1.5)
    assert LabeledVideo(random_video, 0.33).label == 0.33


def test_manifest(tmp_path, random_video):
    (tmp_path / "v").mkdir()
    write_packed(random_video, tmp_path / "v" / "a.cavf")
    write_packed(random_video, tmp_path / "v" / "b.cavf")
    manifest = tmp_path / "labels.txt"
    write_manifest(
        manifest,
        [ManifestEntry("a", "v/a.cavf", 0.0), ManifestEntry("b", "v/b.cavf", 0.66)],
    )
    with open(manifest, "a") as f:
        f.write("# trailing comment\n\n")
    entries = read_manifest(manifest)
    assert [e.video_id for e in entries] == ["a", "b"]
    videos = load_labeled_videos(manifest)
    assert [v.label for v in videos] == [0.0, 0.66]
    assert videos[1].video_id == "b"
    assert videos[1].video.frames.shape == (5, 6, 4, 3)


@pytest.mark.parametrize("line", ["a,v.cavf", "a,v.cavf,high", "a,v.cavf,1.2"])
def test_manifest_errors(tmp_path, line):
    manifest = tmp_path / "labels.txt"
    manifest.write_text(line + "\n")
    with pytest.raises(ValueError, match="labels.txt:1"):
        read_manifest(manifest)


def test_predictions_round_trip(tmp_path):
    path = tmp_path / "pred.txt"
    path.write_text("\n".join(format_predictions(["a", "b"], [0.25, 1.0])) + "\n")
    assert read_predictions(path) == {"a": 0.25, "b": 1.0}


def test_synth_dataset_levels_and_brightness():
    videos = synth_dataset(8, n_frames=6, H=8, W=8, seed=0)
    labels = [v.label for v in videos]
    assert sorted(set(labels)) == [0.0, 0.33, 0.66, 1.0]
    for labeled in videos:
        frames = labeled.video.frames
        assert frames.shape == (6, 8, 8, 3)
        assert abs(frames.mean() / 255 - labeled.label) < 0.02
        if labeled.label == 0.0:
            assert frames.mean() < 1


@pytest.mark.parametrize("H, W", [(1, 1), (3, 3), (5, 7), (8, 8)])
@pytest.mark.parametrize("n_frames", [1, 2, 3])
def test_synth_brightness_with_odd_frame_sizes(H, W, n_frames):
    for labeled in synth_dataset(8, n_frames=n_frames, H=H, W=W, seed=0):
        frames = labeled.video.frames
        assert abs(frames.mean() / 255 - labeled.label) < 0.02


def test_sequence_frames(random_video):
    frames = sequence_frames(random_video, [2, 5], dtype=torch.float32)
    assert frames.dtype == torch.float32
    assert frames.shape == (2, 6, 4, 3)
    assert frames.is_contiguous()
    expected = random_video.frames[[1, 4]].astype(np.float64) / 255
    assert_allclose(frames.numpy(), expected, rtol=1e-6)
    with pytest.raises(DimensionError):
        sequence_frames(random_video, [])


def test_synth_dataset_is_seeded():
    a = synth_dataset(5, n_frames=(4, 12), H=4, W=4, seed=3)
    b = synth_dataset(5, n_frames=(4, 12), H=4, W=4, seed=3)
    assert [v.video for v in a] == [v.video for v in b]
    assert [v.label for v in a] == [v.label for v in b]
    assert all(4 <= v.video.n <= 12 for v in a)
    with pytest.raises(ValueError):
        synth_dataset(0, n_frames=4, H=4, W=4)


def test_evaluate_perfect():
    with pytest.warns(UserWarning):
        metrics = evaluate([0.0, 0.33, 1.0], [0.0, 0.33, 1.0])
    assert metrics.mse == 0 and metrics.mmse == 0
    assert metrics.absent_levels == (0.66,)
    assert metrics.lines()[0] == "mse=0"


def test_evaluate_symmetric():
    with pytest.warns(UserWarning, match="0.33, 0.66"):
        metrics = evaluate([0.5, 0.5], [0.0, 1.0])
    assert metrics.mse == 0.25
    assert metrics.per_level_mse == {0.0: 0.25, 1.0: 0.25}
    assert metrics.mmse == 0.25


def test_evaluate_worked_example():
    metrics = evaluate([0.1, 0.33, 0.66, 1.0], [0.0, 0.33, 0.66, 1.0])
    assert metrics.mse == pytest.approx(0.0025, abs=1e-15)
    assert metrics.mmse == pytest.approx(0.0025, abs=1e-15)
    assert metrics.per_level_mse[0.0] == pytest.approx(0.01)
    assert metrics.absent_levels == ()
    assert metrics.lines()[:2] == ["mse=0.0025", "mmse=0.0025"]


def test_evaluate_imbalance_and_order():
    labels = [0.0, 0.0, 0.0, 1.0]
    predictions = [0.0, 0.0, 0.0, 0.0]
    with pytest.warns(UserWarning):
        metrics = evaluate(predictions, labels)
    assert metrics.mse == pytest.approx(0.25)
    assert metrics.mmse == pytest.approx(0.5)
    with pytest.warns(UserWarning):
        shuffled = evaluate(predictions[::-1], labels[::-1])
    assert shuffled.mmse == metrics.mmse


def test_evaluate_balanced_equal_errors():
    labels = np.repeat([0.0, 0.33, 0.66, 1.0], 3)
    predictions = labels + 0.1 * np.repeat([1, 1, -1, -1], 3)
    metrics = evaluate(predictions, labels)
    assert_allclose(list(metrics.per_level_mse.values()), 0.01 * np.ones(4))
    assert metrics.mmse == pytest.approx(metrics.mse)


def test_evaluate_non_level_labels():
    metrics = evaluate([0.2, 0.5, 0.5], [0.25, 0.5, 0.75])
    assert set(metrics.per_level_mse) == {0.25, 0.5, 0.75}
    assert metrics.absent_levels == ()


def test_evaluate_errors():
    with pytest.raises(ValueError):
        evaluate([], [])
    with pytest.raises(ValueError):
        evaluate([0.1, 0.2], [0.0])


def test_sequence_dataset(synth_videos):
    sampling = SamplingParams(gamma=1, T=4, alpha=1, r=2)
    dataset = SequenceDataset(synth_videos, sampling)
    assert len(dataset) == 2 * len(synth_videos)
    frames, label = dataset[3]
    assert frames.shape == (4, 8, 8, 3)
    assert frames.dtype == torch.float64
    assert 0.0 <= float(frames.min()) and float(frames.max()) <= 1.0
    assert float(label) == synth_videos[1].label
    expected = synth_videos[1].video.select(dataset.items[3][1]) / 255.0
    assert np.array_equal(frames.numpy(), expected)
