"""Exception types raised across pycavt.

Every class derives from the builtin category a caller would expect, so
``except ValueError`` keeps working for shape, data and configuration
problems.
"""
from __future__ import annotations


class DimensionError(ValueError):
    """Shapes that do not agree, or sizes that do not divide."""


class ContractError(RuntimeError):
    """Misuse of the differentiation API."""


class NumericError(ArithmeticError):
    """Non-finite values, or a precision unfit for the requested check."""


class InsufficientFramesError(ValueError):
    """A video is too short for the requested sampling parameters."""


class ExhaustedWindowError(ValueError):
    """More representatives were requested than a window can provide."""


class PackedFormatError(ValueError):
    """A binary container could not be parsed.

    Args:
        message (str): What went wrong.
        offset (int): Byte offset at which parsing failed.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class ConfigError(ValueError):
    """Unknown or invalid configuration keys and values."""


class CompatibilityError(ValueError):
    """A checkpoint was written for a different configuration.

    Args:
        key (str): The first configuration key whose values differ.
        expected: Value in the runtime configuration.
        found: Value stored in the checkpoint.
    """

    def __init__(self, key, expected, found):
        super().__init__(
            f"checkpoint mismatch on '{key}': runtime has {expected!r}, "
            f"checkpoint has {found!r}"
        )
        self.key = key
