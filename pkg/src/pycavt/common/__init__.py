from __future__ import annotations

from .config import coerce_value
from .config import format_value
from .config import parse_key_values
from .exceptions import CompatibilityError
from .exceptions import ConfigError
from .exceptions import ContractError
from .exceptions import DimensionError
from .exceptions import ExhaustedWindowError
from .exceptions import InsufficientFramesError
from .exceptions import NumericError
from .exceptions import PackedFormatError
from .validation import check_finite
from .validation import match_level
from .validation import validate_labels
from .validation import validate_video

ENGAGEMENT_LEVELS = (0.0, 0.33, 0.66, 1.0)

__all__ = [
    "ENGAGEMENT_LEVELS",
    "CompatibilityError",
    "ConfigError",
    "ContractError",
    "DimensionError",
    "ExhaustedWindowError",
    "InsufficientFramesError",
    "NumericError",
    "PackedFormatError",
    "check_finite",
    "coerce_value",
    "format_value",
    "parse_key_values",
    "match_level",
    "validate_labels",
    "validate_video",
]
