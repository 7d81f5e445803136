"""Binary-order representatives sampling.

A video of ``n`` frames is downsampled at rate ``gamma``, the kept frames are
cut into ``T`` overlapping slide windows of size ``zeta = alpha * xi`` spaced
``xi`` apart, and every window elects representatives by walking a binary
tree over its frame range. Sequence ``m`` takes the ``m``-th representative
of every window, so ``r`` sequences cover ``r`` distinct frames per window.

All indices are 1-based, both on the downsampled axis and on the original
video axis.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from dataclasses import field
from enum import Enum

import numpy as np

from ..common import ConfigError
from ..common import ExhaustedWindowError
from ..common import InsufficientFramesError

logger = logging.getLogger(__name__)


class OrderMode(str, Enum):
    """How representatives are elected within a window."""

    BFS = "bfs"
    HALVING = "halving"
    RANDOM = "random"


@dataclass(frozen=True)
class SamplingParams:
    """Hyperparameters of the sampler.

    Args:
        gamma (int): Sample rate; every ``gamma``-th frame is kept.
        T (int): Number of slide windows, i.e. frames per sequence.
        alpha (int): Ratio of window size to stride.
        r (int): Number of sequences generated per video.
        order_mode (OrderMode): Representative election rule.
    """

    gamma: int = 1
    T: int = 4
    alpha: int = 1
    r: int = 1
    order_mode: OrderMode = OrderMode.BFS

    def __post_init__(self):
        for name in ("gamma", "T", "alpha", "r"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ConfigError(f"{name} must be a positive integer; got {value!r}")
        object.__setattr__(self, "order_mode", OrderMode(self.order_mode))

    def min_frames(self):
        """Smallest video length satisfying ``n >= gamma * (T + alpha - 1)``."""
        return self.gamma * (self.T + self.alpha - 1)


@dataclass(frozen=True)
class WindowPlan:
    """Partition of ``m`` downsampled frames into slide windows.

    Attributes:
        m (int): Number of downsampled frames.
        xi (int): Stride between window starts.
        zeta (int): Window size, ``alpha * xi``.
        windows (tuple of (int, int)): Inclusive 1-based ranges.
    """

    m: int
    xi: int
    zeta: int
    windows: tuple

    @property
    def T(self):
        return len(self.windows)


@dataclass(frozen=True)
class SequenceSet:
    """The ``r`` frame-index sequences drawn from one video.

    Attributes:
        sequences (tuple of tuple of int): ``sequences[m][i]`` is the
            original-video index of the frame taken from window ``i`` by
            sequence ``m + 1``.
        order_mode (OrderMode): Election rule that produced them.
        plan (WindowPlan): Windows on the downsampled axis.
    """

    sequences: tuple
    order_mode: OrderMode
    plan: WindowPlan = field(compare=False)

    @property
    def r(self):
        return len(self.sequences)

    @property
    def first(self):
        """``S^1``, the sequence used at prediction time."""
        return self.sequences[0]


def _insufficient(n, gamma, T, alpha):
    bound = gamma * (T + alpha - 1)
    return InsufficientFramesError(
        f"insufficient frames: need n >= γ(T+α−1) = {gamma}·({T}+{alpha}−1) "
        f"= {bound}, got n = {n}"
    )


def downsample(n, gamma):
    """Keep the first frame of every block of ``gamma`` frames.

    Args:
        n (int): Number of frames in the video.
        gamma (int): Sample rate.

    Returns:
        list of int: ``[(j - 1) * gamma + 1 for j in 1..n // gamma]``; the
        trailing ``n % gamma`` frames are dropped.
    """
    if gamma < 1:
        raise ConfigError("gamma must be a positive integer")
    if n < gamma:
        raise InsufficientFramesError(
            f"insufficient frames: a video of {n} frames cannot be sampled "
            f"at rate {gamma}"
        )
    return list(range(1, (n // gamma - 1) * gamma + 2, gamma))


def plan_windows(m, T, alpha):
    """Divide ``m`` downsampled frames into ``T`` slide windows.

    The stride is ``xi = m // (T + alpha - 1)`` and the window size
    ``zeta = alpha * xi``; window ``w`` covers ``[(w-1)*xi + 1, (w-1)*xi + zeta]``.

    Args:
        m (int): Number of downsampled frames.
        T (int): Number of windows.
        alpha (int): Ratio of window size to stride.

    Returns:
        WindowPlan: The partition.
    """
    if T < 1 or alpha < 1:
        raise ConfigError("T and alpha must be positive integers")
    if m < T + alpha - 1:
        raise InsufficientFramesError(
            f"insufficient frames: need m >= T+α−1 = {T + alpha - 1} "
            f"downsampled frames, got m = {m}"
        )
    xi = m // (T + alpha - 1)
    zeta = alpha * xi
    windows = tuple(((w - 1) * xi + 1, (w - 1) * xi + zeta) for w in range(1, T + 1))
    unused = m - windows[-1][1]
    if unused:
        logger.debug("window plan leaves %d trailing frames unused", unused)
    return WindowPlan(m=m, xi=xi, zeta=zeta, windows=windows)


def _bfs_order(a, b):
    queue = deque([(a, b)])
    while queue:
        lo, hi = queue.popleft()
        mid = lo + (hi - lo) // 2
        yield mid
        if lo <= mid - 1:
            queue.append((lo, mid - 1))
        if mid + 1 <= hi:
            queue.append((mid + 1, hi))


def representatives(window, r, order_mode=OrderMode.BFS):
    """Elect ``r`` representative frames of an inclusive ``window``.

    In BFS mode the frames are the first ``r`` nodes, in breadth-first order,
    of the binary search tree whose node for subrange ``(a, b)`` is
    ``a + (b - a) // 2``. In HALVING mode they are
    ``(a - 1) + (1 + zeta) / 2**m`` for ``m = 1..r``, which requires
    ``1 + zeta`` to be divisible by ``2**r``.

    Args:
        window (tuple of int): Inclusive 1-based range ``(a, b)``.
        r (int): Number of representatives.
        order_mode (OrderMode): ``BFS`` or ``HALVING``.

    Returns:
        list of int: The elected indices, in election order.
    """
    a, b = window
    if b < a:
        raise ValueError(f"empty window {window}")
    if r < 1:
        raise ValueError("r must be a positive integer")
    zeta = b - a + 1
    order_mode = OrderMode(order_mode)
    if order_mode is OrderMode.BFS:
        if r > zeta:
            raise ExhaustedWindowError(
                f"window {window} has {zeta} frames; cannot elect {r} representatives"
            )
        nodes = _bfs_order(a, b)
        return [next(nodes) for _ in range(r)]
    if order_mode is OrderMode.HALVING:
        if (1 + zeta) % (2**r):
            raise ExhaustedWindowError(
                f"halving order needs 1 + ζ divisible by 2^r; "
                f"got ζ = {zeta}, r = {r}"
            )
        return [(a - 1) + (1 + zeta) // 2**m for m in range(1, r + 1)]
    raise ValueError(f"representatives does not support order mode {order_mode}")


def sequence_budget(n, params):
    """Largest ``r`` for which ``params`` still yields distinct sequences.

    Args:
        n (int): Number of frames in the video.
        params (SamplingParams): Sampling hyperparameters.

    Returns:
        int: ``zeta`` for BFS and random order; for halving order, the
        largest ``r`` with ``1 + zeta`` divisible by ``2**r``.
    """
    kept = downsample(n, params.gamma)
    if len(kept) < params.T + params.alpha - 1:
        raise _insufficient(n, params.gamma, params.T, params.alpha)
    zeta = plan_windows(len(kept), params.T, params.alpha).zeta
    if params.order_mode is OrderMode.HALVING:
        budget = 0
        while (1 + zeta) % (2 ** (budget + 1)) == 0:
            budget += 1
        return budget
    return zeta


def _plan_for(n, params):
    if n < params.min_frames():
        raise _insufficient(n, params.gamma, params.T, params.alpha)
    kept = downsample(n, params.gamma)
    plan = plan_windows(len(kept), params.T, params.alpha)
    budget = sequence_budget(n, params)
    if params.r > budget:
        raise ExhaustedWindowError(
            f"r = {params.r} exceeds the {budget} distinct representatives "
            f"windows of size {plan.zeta} provide in {params.order_mode.value} order"
        )
    return kept, plan


def generate_sequences(n, params):
    """Generate the ``r`` BorS sequences of a video with ``n`` frames.

    Args:
        n (int): Number of frames in the video.
        params (SamplingParams): Sampling hyperparameters; ``order_mode``
            selects BFS or HALVING election.

    Returns:
        SequenceSet: ``r`` sequences of ``T`` original-video frame indices.
    """
    if params.order_mode is OrderMode.RANDOM:
        raise ValueError("use random_sequences for random order")
    kept, plan = _plan_for(n, params)
    elected = [representatives(w, params.r, params.order_mode) for w in plan.windows]
    sequences = tuple(
        tuple(kept[reps[m] - 1] for reps in elected) for m in range(params.r)
    )
    return SequenceSet(sequences=sequences, order_mode=params.order_mode, plan=plan)


def random_sequences(n, params, seed):
    """Windowing as in :func:`generate_sequences`, with each window's ``r``
    representatives drawn uniformly without replacement.

    Args:
        n (int): Number of frames in the video.
        params (SamplingParams): Sampling hyperparameters.
        seed (int): Seed of the draw; equal seeds give equal results.

    Returns:
        SequenceSet: ``r`` sequences, ``order_mode`` RANDOM.
    """
    params = SamplingParams(params.gamma, params.T, params.alpha, params.r, "random")
    kept, plan = _plan_for(n, params)
    rng = np.random.default_rng(seed)
    elected = [
        rng.choice(np.arange(a, b + 1), size=params.r, replace=False).tolist()
        for a, b in plan.windows
    ]
    sequences = tuple(
        tuple(kept[reps[m] - 1] for reps in elected) for m in range(params.r)
    )
    return SequenceSet(sequences=sequences, order_mode=OrderMode.RANDOM, plan=plan)


def sample_video(n, params, seed=0):
    """Dispatch to :func:`generate_sequences` or :func:`random_sequences`."""
    if params.order_mode is OrderMode.RANDOM:
        return random_sequences(n, params, seed)
    return generate_sequences(n, params)


def format_manifest(video_id, sequence_set):
    """Render sequences as ``video_id,seq_index,i1,i2,...`` lines.

    ``seq_index`` is 1-based, matching ``S^1 .. S^r``.
    """
    return [
        ",".join([str(video_id), str(m)] + [str(i) for i in seq])
        for m, seq in enumerate(sequence_set.sequences, start=1)
    ]
