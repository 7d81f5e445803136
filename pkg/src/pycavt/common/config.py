"""Flat ``key=value`` text used by config files and checkpoint headers."""
from __future__ import annotations

from enum import Enum

from .exceptions import ConfigError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_key_values(lines, source="<config>"):
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped.

    Args:
        lines (iterable of str): Text lines.
        source (str): Name used in error messages.

    Returns:
        dict of str to str: Raw values, later lines overriding earlier ones.
    """
    values = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{number}: expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def format_value(value):
    """Render a value so that :func:`coerce_value` reads it back unchanged."""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def coerce_value(name, text, default):
    """Convert ``text`` to the type of ``default``.

    Args:
        name (str): Key, for error messages.
        text (str): Raw value.
        default: A value of the target type (bool, int, float, str or Enum).

    Returns:
        The converted value.
    """
    try:
        if isinstance(default, bool):
            lowered = text.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(text)
        if isinstance(default, Enum):
            return type(default)(text.lower())
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
    except ValueError as error:
        raise ConfigError(f"invalid value for {name}: {text!r}") from error
    return text
