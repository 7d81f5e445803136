"""Binary checkpoint container.

Layout, all integers little-endian:

* magic ``b"CAVP"``
* format version, u32
* header length in bytes, u32, followed by the UTF-8 header: one
  ``key=value`` line per :class:`CavTConfig` field
* for every parameter in declaration order: rank (u32), each dimension
  (u32), then the values as float64
"""
from __future__ import annotations

import io
import logging
import struct
from dataclasses import fields
from pathlib import Path

import numpy as np
import torch

from ..common import coerce_value
from ..common import CompatibilityError
from ..common import ConfigError
from ..common import format_value
from ..common import PackedFormatError
from ..common import parse_key_values
from ._config import CavTConfig
from ._network import build_network
from ._network import parameter_shapes

logger = logging.getLogger(__name__)

MAGIC = b"CAVP"
VERSION = 1
# settings that only shape initialization or training, not inference
TRAINING_ONLY_KEYS = ("drop_rate", "layerscale_init", "init_std")


def _header(config):
    lines = [f"{k}={format_value(v)}" for k, v in config.to_dict().items()]
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_checkpoint(dest, network):
    """Serialize ``network`` and its configuration.

    Args:
        dest (str, Path or binary stream): Target file.
        network (CavTNetwork): The network to save.
    """
    header = _header(network.config)
    buffer = io.BytesIO()
    buffer.write(MAGIC)
    buffer.write(struct.pack("<II", VERSION, len(header)))
    buffer.write(header)
    for _, param in network.named_parameters():
        values = param.detach().cpu().numpy().astype("<f8", copy=False)
        buffer.write(struct.pack(f"<I{values.ndim}I", values.ndim, *values.shape))
        buffer.write(values.tobytes(order="C"))
    payload = buffer.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_bytes(payload)
        logger.info("wrote checkpoint %s (%d bytes)", dest, len(payload))
    else:
        dest.write(payload)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.offset = 0

    def take(self, size, what):
        if self.offset + size > len(self.data):
            raise PackedFormatError(
                f"truncated checkpoint while reading {what}", self.offset
            )
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def u32(self, what):
        return struct.unpack("<I", self.take(4, what))[0]


def _parse_config(text):
    defaults = CavTConfig()
    raw = parse_key_values(text.splitlines(), source="checkpoint header")
    names = [f.name for f in fields(CavTConfig)]
    unknown = sorted(set(raw) - set(names))
    if unknown:
        raise ConfigError(f"unknown keys in checkpoint header: {', '.join(unknown)}")
    kwargs = {
        name: coerce_value(name, raw[name], getattr(defaults, name))
        for name in names
        if name in raw
    }
    return CavTConfig(**kwargs)


def read_checkpoint(source):
    """Parse a checkpoint into its configuration and parameter arrays.

    Args:
        source (str, Path or binary stream): Checkpoint file.

    Returns:
        tuple: ``(CavTConfig, list of np.ndarray)`` in declaration order.
    """
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    reader = _Reader(data)
    if reader.take(4, "magic") != MAGIC:
        raise PackedFormatError("not a checkpoint: bad magic", 0)
    version = reader.u32("version")
    if version != VERSION:
        raise PackedFormatError(f"unsupported checkpoint version {version}", 4)
    length = reader.u32("header length")
    config = _parse_config(reader.take(length, "header").decode("utf-8"))
    arrays = []
    for name, expected in parameter_shapes(config):
        start = reader.offset
        rank = reader.u32(f"rank of {name}")
        shape = tuple(reader.u32(f"shape of {name}") for _ in range(rank))
        if shape != expected:
            raise PackedFormatError(
                f"{name} has shape {shape}; the header declares {expected}", start
            )
        count = int(np.prod(shape, dtype=np.int64))
        raw = reader.take(8 * count, f"values of {name}")
        arrays.append(np.frombuffer(raw, dtype="<f8").reshape(shape).copy())
    if reader.offset != len(data):
        raise PackedFormatError("trailing bytes after the last tensor", reader.offset)
    return config, arrays


def load_checkpoint(source, expected=None, dtype=torch.float64):
    """Rebuild a network from a checkpoint.

    Args:
        source (str, Path or binary stream): Checkpoint file.
        expected (CavTConfig, optional): Runtime configuration; any
            differing field outside ``TRAINING_ONLY_KEYS`` raises
            :class:`CompatibilityError`.
        dtype (torch.dtype): Precision of the returned network.

    Returns:
        CavTNetwork: The network in eval mode.
    """
    config, arrays = read_checkpoint(source)
    if expected is not None:
        found, wanted = config.to_dict(), expected.to_dict()
        for key, value in wanted.items():
            if key not in TRAINING_ONLY_KEYS and found[key] != value:
                raise CompatibilityError(key, value, found[key])
    network = build_network(config, dtype=torch.float64)
    with torch.no_grad():
        for param, array in zip(network.parameters(), arrays):
            param.copy_(torch.from_numpy(array))
    return network.to(dtype).eval()
