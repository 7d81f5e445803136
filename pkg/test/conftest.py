"""
Shared pytest fixtures for unit tests.

Put any datasets that are used by multiple unit test files here.
"""
from __future__ import annotations

import pytest
import torch
from pycavt.bors import SamplingParams
from pycavt.data import synth_dataset
from pycavt.model import build_network
from pycavt.model import CavTConfig


@pytest.fixture
def tiny_config():
    return CavTConfig(
        T=4,
        H=8,
        W=8,
        t=2,
        p=4,
        c=16,
        h=2,
        L1=2,
        L2=1,
        mlp_ratio=2.0,
        layerscale_init=0.1,
        use_positional=True,
    )


@pytest.fixture
def tiny_network(tiny_config):
    return build_network(tiny_config, seed=0).eval()


@pytest.fixture
def tiny_frames(tiny_config):
    generator = torch.Generator().manual_seed(1234)
    cfg = tiny_config
    shape = (cfg.T, cfg.H, cfg.W, 3)
    return torch.rand(shape, generator=generator, dtype=torch.float64)


@pytest.fixture
def tiny_sampling(tiny_config):
    return SamplingParams(gamma=1, T=tiny_config.T, alpha=1, r=2)


@pytest.fixture
def synth_videos():
    # four videos per engagement level
    return synth_dataset(16, n_frames=8, H=8, W=8, seed=0)
