"""Command-line interface: ``pycavt <command> [options]``.

Commands: sample, synth, train, predict, eval, gradcheck, summary.

Settings come from a preset, then ``--config`` file, then ``--set`` pairs,
then the dedicated flags, later sources winning. Exit codes: 0 success,
1 failed verification, 2 data error, 64 usage or configuration error,
65 checkpoint incompatible with the configuration.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from dataclasses import fields
from enum import IntEnum
from pathlib import Path

import numpy as np
import torch
from prettytable import PrettyTable

from .bors import format_manifest
from .bors import OrderMode
from .bors import sample_video
from .bors import SamplingParams
from .common import CompatibilityError
from .common import ConfigError
from .common import coerce_value
from .common import DimensionError
from .common import ExhaustedWindowError
from .common import format_value
from .common import InsufficientFramesError
from .common import NumericError
from .common import PackedFormatError
from .common import parse_key_values
from .data import evaluate
from .data import format_predictions
from .data import load_labeled_videos
from .data import ManifestEntry
from .data import read_packed
from .data import read_predictions
from .data import synth_dataset
from .data import write_manifest
from .data import write_packed
from .model import build_network
from .model import CavTConfig
from .model import count_params
from .model import load_checkpoint
from .model import parameter_shapes
from .model import write_checkpoint
from .numerics import gradient_errors
from .training import predict_many
from .training import train
from .training import TrainConfig
from .training import write_loss_log

logger = logging.getLogger(__name__)

GRADCHECK_MAX_PARAMS = 100_000
GRADCHECK_TOLERANCE = 1e-4
# published parameter count of the 12+2 block, width-1024 network
REFERENCE_PARAMS = 119.85e6


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION = 1
    DATA = 2
    USAGE = 64
    COMPATIBILITY = 65


PRESETS = {
    "tiny": dict(
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
        gamma=1,
        alpha=1,
        r=2,
    ),
    "emotiw": dict(
        T=32,
        H=112,
        W=112,
        t=2,
        p=14,
        c=1024,
        h=16,
        L1=12,
        L2=2,
        gamma=5,
        alpha=3,
        r=4,
        batch_size=4,
        learning_rate=1e-5,
        epochs=20,
        drop_rate=0.05,
    ),
}
PRESETS["daisee"] = dict(PRESETS["emotiw"], T=8, gamma=1, alpha=5, r=3, batch_size=8)

_SAMPLING_KEYS = {"gamma": 1, "alpha": 1, "r": 1, "order_mode": OrderMode.BFS}


def _defaults():
    out = {}
    # shared keys such as drop_rate take the network default
    for instance in (TrainConfig(), CavTConfig()):
        out.update({f.name: getattr(instance, f.name) for f in fields(instance)})
    out.update(_SAMPLING_KEYS)
    return out


def parse_class_weights(text):
    """``"0:3,0.33:1"`` to ``{0.0: 3.0, 0.33: 1.0}``; empty or ``none`` is None."""
    if text.strip().lower() in ("", "none"):
        return None
    weights = {}
    for item in text.split(","):
        level, sep, weight = item.partition(":")
        try:
            weights[float(level)] = float(weight)
        except ValueError as error:
            raise ConfigError(f"invalid class_weights entry {item!r}") from error
        if not sep:
            raise ConfigError(f"invalid class_weights entry {item!r}")
    return weights


@dataclass(frozen=True)
class RunConfig:
    """Network, training and sampling settings of one command.

    Attributes:
        model (CavTConfig): Network shape.
        train (TrainConfig): Optimization settings, including ``seed``.
        sampling (SamplingParams): BorS settings; ``T`` follows ``model``.
        preset (str): Name of the preset the settings started from.
    """

    model: CavTConfig
    train: TrainConfig
    sampling: SamplingParams
    preset: str = "tiny"

    @classmethod
    def keys(cls):
        return sorted(set(_defaults()) | {"preset"})

    @classmethod
    def from_sources(cls, path=None, overrides=(), seed=None, order_mode=None):
        """Merge preset, config file, ``KEY=VALUE`` overrides and flags.

        Args:
            path (str or Path, optional): Config file of ``key=value`` lines.
            overrides (list of str): ``KEY=VALUE`` strings.
            seed (int, optional): Value of the ``--seed`` flag.
            order_mode (str, optional): Value of the ``--order-mode`` flag.

        Returns:
            RunConfig: The merged configuration.
        """
        from_file = {}
        if path is not None:
            try:
                text = Path(path).read_text()
            except OSError as error:
                raise ConfigError(f"cannot read config file {path}: {error}")
            from_file = parse_key_values(text.splitlines(), source=str(path))
        from_set = parse_key_values(overrides, source="--set")
        known = set(cls.keys())
        for key in [*from_file, *from_set]:
            if key not in known:
                raise ConfigError(f"unknown configuration key '{key}'")

        preset = from_set.get("preset", from_file.get("preset", "tiny"))
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset '{preset}'; choose from {', '.join(PRESETS)}"
            )
        values = dict(PRESETS[preset])
        values.update(from_file)
        values.update(from_set)
        if seed is not None:
            values["seed"] = seed
        if order_mode is not None:
            values["order_mode"] = order_mode
        values.pop("preset", None)

        defaults = _defaults()
        typed = dict(defaults)
        for key, value in values.items():
            if key == "class_weights" and isinstance(value, str):
                value = parse_class_weights(value)
            elif isinstance(value, str):
                value = coerce_value(key, value, defaults[key])
            typed[key] = value

        model = CavTConfig(**{f.name: typed[f.name] for f in fields(CavTConfig)})
        train_config = TrainConfig(
            **{f.name: typed[f.name] for f in fields(TrainConfig)}
        )
        sampling = SamplingParams(
            gamma=typed["gamma"],
            T=model.T,
            alpha=typed["alpha"],
            r=typed["r"],
            order_mode=typed["order_mode"],
        )
        return cls(model, train_config, sampling, preset)

    def lines(self):
        """The merged settings as ``key=value`` lines."""
        values = {"preset": self.preset}
        values.update(self.model.to_dict())
        values.update(
            {f.name: getattr(self.train, f.name) for f in fields(TrainConfig)}
        )
        values.update(
            {key: getattr(self.sampling, key) for key in _SAMPLING_KEYS}
        )
        return [f"{key}={format_value(value)}" for key, value in sorted(values.items())]


def _emit(lines, out=None):
    text = "".join(f"{line}\n" for line in lines)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        logger.info("wrote %s", out)


def cmd_sample(args, config):
    video = read_packed(args.video)
    sequences = sample_video(video.n, config.sampling, seed=config.train.seed)
    _emit(format_manifest(video.video_id, sequences), args.out)
    return ExitCode.OK


def _frame_range(text):
    low, sep, high = text.partition(":")
    try:
        return (int(low), int(high)) if sep else int(low)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LOW:HIGH, got {text!r}")


def cmd_synth(args, config):
    root = Path(args.out or "synth")
    (root / "videos").mkdir(parents=True, exist_ok=True)
    videos = synth_dataset(
        args.count,
        args.frames,
        config.model.H,
        config.model.W,
        seed=config.train.seed,
    )
    entries = []
    for labeled in videos:
        rel = f"videos/{labeled.video_id}.cavf"
        write_packed(labeled.video, root / rel)
        entries.append(ManifestEntry(labeled.video_id, rel, labeled.label))
    write_manifest(root / "manifest.txt", entries)
    print(root / "manifest.txt")
    return ExitCode.OK


def cmd_train(args, config):
    videos = load_labeled_videos(args.manifest)
    val_videos = load_labeled_videos(args.val) if args.val else None
    network, records = train(
        videos, config.sampling, config.model, config.train, val_videos=val_videos
    )
    out = Path(args.out or "checkpoint.cavp")
    write_checkpoint(out, network)
    log_path = args.log or f"{out}.log"
    write_loss_log(log_path, records)
    if records:
        print(f"final_loss={records[-1][2]:.6g}")
    print(f"checkpoint={out}")
    return ExitCode.OK


def _load_network(path, config):
    return load_checkpoint(path, expected=config.model)


def cmd_predict(args, config):
    network = _load_network(args.checkpoint, config)
    videos = load_labeled_videos(args.manifest)
    predictions = predict_many(
        [v.video for v in videos], config.sampling, network, seed=config.train.seed
    )
    _emit(format_predictions([v.video_id for v in videos], predictions), args.out)
    return ExitCode.OK


def cmd_eval(args, config):
    videos = load_labeled_videos(args.manifest)
    labels = [v.label for v in videos]
    if args.predictions:
        predicted = read_predictions(args.predictions)
        missing = [v.video_id for v in videos if v.video_id not in predicted]
        if missing:
            raise ValueError(f"no prediction for {', '.join(missing)}")
        predictions = [predicted[v.video_id] for v in videos]
    elif args.checkpoint:
        network = _load_network(args.checkpoint, config)
        predictions = predict_many(
            [v.video for v in videos], config.sampling, network, seed=config.train.seed
        )
    else:
        raise ConfigError("eval needs --checkpoint or --predictions")
    _emit(evaluate(predictions, labels).lines(), args.out)
    return ExitCode.OK


def _group(name):
    parts = name.split(".")
    if parts[0] in ("sa_blocks", "ca_blocks"):
        return ".".join(parts[:2])
    if parts[0] == "head":
        return "head"
    return "embedding"


def cmd_gradcheck(args, config):
    total = count_params(config.model)
    if total > GRADCHECK_MAX_PARAMS:
        raise ConfigError(
            f"gradcheck is limited to {GRADCHECK_MAX_PARAMS} parameters; "
            f"this configuration has {total}"
        )
    cfg = config.model
    seed = config.train.seed
    network = build_network(cfg, seed=seed).eval()
    generator = torch.Generator().manual_seed(seed)
    frames = torch.rand(
        (cfg.T, cfg.H, cfg.W, 3), generator=generator, dtype=torch.float64
    )

    def objective():
        return network(frames, logits=True)

    corrupt = None
    if args.corrupt_gradient:

        def corrupt(name, grad):
            return grad * 1.5 + 1e-6

    errors = gradient_errors(
        objective, dict(network.named_parameters()), h=args.step, corrupt=corrupt
    )
    groups = {}
    for name, error in errors.items():
        key = _group(name)
        groups[key] = max(groups.get(key, 0.0), error)
    overall = max(groups.values())
    lines = [f"{key} max_rel_error={value:.3e}" for key, value in groups.items()]
    lines.append(f"overall max_rel_error={overall:.3e}")
    _emit(lines, args.out)
    if overall < GRADCHECK_TOLERANCE:
        return ExitCode.OK
    logger.error("gradient check failed: %.3e >= %.0e", overall, GRADCHECK_TOLERANCE)
    return ExitCode.VERIFICATION


def cmd_summary(args, config):
    cfg = config.model
    table = PrettyTable(["parameter", "shape", "count"])
    table.align["parameter"] = "l"
    table.align["count"] = "r"
    for name, shape in parameter_shapes(cfg):
        table.add_row([name, "x".join(map(str, shape)), int(np.prod(shape))])
    total = count_params(cfg)
    lines = [table.get_string(), f"total={total}"]
    if cfg.c == 1024 and cfg.L1 == 12 and cfg.L2 == 2:
        lines.append(
            f"reference={REFERENCE_PARAMS / 1e6:.2f}M computed={total / 1e6:.2f}M "
            "(diagnostic)"
        )
    _emit(lines, args.out)
    return ExitCode.OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key=value lines")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one setting (repeatable)",
    )
    common.add_argument(
        "--order-mode", choices=[mode.value for mode in OrderMode], default=None
    )
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", help="output path")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="pycavt", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    sample = commands.add_parser(
        "sample", parents=[common], help="print BorS sequences"
    )
    sample.add_argument("video", help="packed video file")
    sample.set_defaults(func=cmd_sample)

    synth = commands.add_parser(
        "synth", parents=[common], help="write a synthetic labeled dataset"
    )
    synth.add_argument("--count", type=int, default=16)
    synth.add_argument(
        "--frames", type=_frame_range, default=8, help="N, or LOW:HIGH per video"
    )
    synth.set_defaults(func=cmd_synth)

    train_cmd = commands.add_parser("train", parents=[common], help="train a model")
    train_cmd.add_argument("manifest", help="label manifest")
    train_cmd.add_argument("--val", help="validation label manifest")
    train_cmd.add_argument("--log", help="loss log path (default: <out>.log)")
    train_cmd.set_defaults(func=cmd_train)

    predict = commands.add_parser("predict", parents=[common], help="predict videos")
    predict.add_argument("checkpoint")
    predict.add_argument("manifest")
    predict.set_defaults(func=cmd_predict)

    eval_cmd = commands.add_parser("eval", parents=[common], help="MSE and MMSE")
    eval_cmd.add_argument("manifest")
    source = eval_cmd.add_mutually_exclusive_group()
    source.add_argument("--checkpoint")
    source.add_argument("--predictions", help="file of video_id,y lines")
    eval_cmd.set_defaults(func=cmd_eval)

    gradcheck = commands.add_parser(
        "gradcheck", parents=[common], help="compare gradients with finite differences"
    )
    gradcheck.add_argument("--step", type=float, default=1e-5)
    gradcheck.add_argument(
        "--corrupt-gradient", action="store_true", help=argparse.SUPPRESS
    )
    gradcheck.set_defaults(func=cmd_gradcheck)

    summary = commands.add_parser(
        "summary", parents=[common], help="parameter shapes and count"
    )
    summary.set_defaults(func=cmd_summary)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return int(stop.code or 0)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    def fail(code, error):
        print(f"pycavt: error: {error}", file=sys.stderr)
        return int(code)

    try:
        config = RunConfig.from_sources(
            args.config, args.overrides, args.seed, args.order_mode
        )
    except (ConfigError, DimensionError) as error:
        return fail(ExitCode.USAGE, error)
    logger.debug("settings:\n%s", "\n".join(config.lines()))

    try:
        return int(args.func(args, config))
    except CompatibilityError as error:
        return fail(ExitCode.COMPATIBILITY, error)
    except ConfigError as error:
        return fail(ExitCode.USAGE, error)
    except (
        InsufficientFramesError,
        ExhaustedWindowError,
        PackedFormatError,
        DimensionError,
        NumericError,
        ValueError,
        OSError,
    ) as error:
        return fail(ExitCode.DATA, error)


if __name__ == "__main__":
    sys.exit(main())
