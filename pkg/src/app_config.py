# Static option lists plus the YAML/.env configuration loader.
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

OUTPUT_FORMATS = (
    "text",
    "json",
)

RATIONAL_DISCRIMINANTS = (
    14,
    26,
    38,
)

WITNESS_KINDS = (
    "pair-witness",
    "triple-witness",
    "rational-loci",
    "user-supplied",
)

LOG_LEVELS = (
    "DEBUG",
    "INFO",
    "WARNING",
    "ERROR",
)

REPO_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = REPO_ROOT / "config" / "config.yaml"

# Environment variable -> (section, key, converter)
ENV_OVERRIDES = {
    "HASSETT_JOBS": ("sweep", "jobs", int),
    "HASSETT_LOG_LEVEL": ("logging", "level", str),
    "HASSETT_FORMAT": ("output", "format", str),
}


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path} must contain a mapping of sections")
    return data


def _merge(defaults: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = {section: dict(values) for section, values in defaults.items()}
    for section, values in overrides.items():
        if not isinstance(values, dict):
            raise ValueError(f"config section {section!r} must be a mapping")
        merged.setdefault(section, {}).update(values)
    return merged


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Read config.yaml, then apply HASSETT_* overrides from the environment / .env.

    A custom config file only needs the keys it changes; everything else comes
    from the repository's config/config.yaml.
    """
    load_dotenv()
    config_path = Path(path or os.getenv("HASSETT_CONFIG") or DEFAULT_CONFIG_PATH)
    if not config_path.exists():
        raise FileNotFoundError(f"Missing config file at {config_path}")
    config = _merge(_read_yaml(DEFAULT_CONFIG_PATH), _read_yaml(config_path))

    for var, (section, key, convert) in ENV_OVERRIDES.items():
        raw = os.getenv(var)
        if raw is None:
            continue
        try:
            config.setdefault(section, {})[key] = convert(raw)
        except ValueError as e:
            raise ValueError(f"{var}={raw!r} is not a valid {convert.__name__}") from e

    if config["output"]["format"] not in OUTPUT_FORMATS:
        raise ValueError(f"output.format must be one of {OUTPUT_FORMATS}")
    level = str(config["logging"]["level"]).upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"logging.level must be one of {LOG_LEVELS}")
    config["logging"]["level"] = level
    return config


def configure_logging(config: Dict[str, Any], verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config["logging"]["level"])
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
