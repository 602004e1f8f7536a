"""
Utility functions for Anick.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from anick.errors import InputError

logger = logging.getLogger(__name__)

# Keys a run configuration file may set, with the type each must have
CONFIG_FIELDS = {
    "oracle_cap": int,
    "workers": int,
    "memo": bool,
    "quiet": bool,
    "verbose": bool,
    "degree": int,
    "max_degree": int,
    "rank": int,
    "window": int,
}

_POSITIVE = ("oracle_cap", "workers", "rank")
_NONNEGATIVE = ("degree", "max_degree", "window")


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load run settings from a YAML file.

    Returns an empty dict when no path is given. Unknown keys and values of
    the wrong type raise InputError.
    """
    if config_path is None:
        return {}

    config_file = Path(config_path).expanduser()
    if not config_file.exists():
        raise InputError(f"Config file not found: {config_path}")

    try:
        with open(config_file, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise InputError(f"Invalid YAML in {config_path}: {e}") from e

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise InputError(f"Config file {config_path} must hold a mapping")

    unknown = sorted(set(config) - set(CONFIG_FIELDS))
    if unknown:
        raise InputError(f"Unknown config keys: {unknown}")

    for key, value in config.items():
        expected = CONFIG_FIELDS[key]
        # bool is an int subclass
        if expected is int and isinstance(value, bool) or not isinstance(value, expected):
            raise InputError(f"Config key {key!r} must be {expected.__name__}, got {value!r}")
        if key in _POSITIVE and value < 1:
            raise InputError(f"Config key {key!r} must be positive, got {value}")
        if key in _NONNEGATIVE and value < 0:
            raise InputError(f"Config key {key!r} must be >= 0, got {value}")

    logger.debug("Loaded config %s: %s", config_path, sorted(config))
    return config

