"""Utility functions: suite catalogue loading and the [re, im] JSON codec."""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import yaml

from .errors import ConfigError, DimensionMismatchError


def load_yaml_config(path: Path = None) -> Dict[str, Any]:
    """
    Load and parse a YAML (or JSON) document.

    Args:
        path: File to read. Defaults to the suite catalogue next to this module.

    Returns:
        Parsed mapping
    """
    config_path = Path(path) if path else Path(__file__).parent / "suite_configs.yaml"

    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config file {config_path} is not valid YAML/JSON: {exc}") from exc

    if not config:
        raise ConfigError(f"Config file is empty: {config_path}")
    if not isinstance(config, dict):
        raise ConfigError(f"Config file {config_path} must hold a mapping at top level")

    return config


def get_available_suites() -> Dict[str, str]:
    """
    Get list of available suites from the catalogue.

    Returns:
        Dictionary of {suite_id: suite_name}
    """
    config = load_yaml_config()
    return {
        suite_id: suite_config.get("name", suite_id)
        for suite_id, suite_config in config.get("suites", {}).items()
    }


def get_suite_config(suite_id: str) -> Dict[str, Any]:
    """
    Get a specific suite configuration.

    Args:
        suite_id: Suite id (e.g. "thm-half-rB")

    Returns:
        Suite configuration dictionary
    """
    suites = load_yaml_config().get("suites", {})

    if suite_id not in suites:
        raise ConfigError(f"Unknown suite: {suite_id}")

    return suites[suite_id]


def get_bundle(name: str = "all") -> Dict[str, Any]:
    bundles = load_yaml_config().get("bundles", {})
    if name not in bundles:
        raise ConfigError(f"Unknown suite bundle: {name}")
    return bundles[name]


def complex_array(pairs: Any) -> np.ndarray:
    """
    Decode nested ``[re, im]`` pairs into a complex array.

    ``[[1, 0], [0, 2]]`` -> ``array([1+0j, 0+2j])``; a matrix is an array of
    rows of pairs.
    """
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise DimensionMismatchError(
            f"Complex values must be encoded as [re, im] pairs, got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def complex_pairs(values: Any) -> List:
    """Encode a complex scalar/array as nested ``[re, im]`` lists (JSON friendly)."""
    arr = np.asarray(values, dtype=complex)
    stacked = np.stack([arr.real, arr.imag], axis=-1)
    return stacked.tolist()

