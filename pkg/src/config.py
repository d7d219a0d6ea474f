import json
import logging
import os
from pathlib import Path
from types import SimpleNamespace
from typing import Any, Dict, Mapping, Optional

logger = logging.getLogger("HamDef.Config")

DEFAULTS: Dict[str, Any] = {
    "root_tol": 1e-12,
    "event_tol": 1e-9,
    "contour_tol": 1e-9,
    "grid": 512,
    "workers": os.cpu_count() or 1,
    "out": "output",
    "log_level": "WARNING",
    "seed": 0,
    "samples": 400,
    "csv": False,
}

# environment variable -> (config key, converter)
ENVIRONMENT = {
    "HAMDEF_WORKERS": ("workers", int),
    "HAMDEF_GRID": ("grid", int),
    "HAMDEF_OUT_DIR": ("out", str),
    "HAMDEF_LOG_LEVEL": ("log_level", str),
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigError(Exception):
    """Custom exception for invalid run configuration."""
    pass


def _from_environment(environ: Mapping[str, str]) -> Dict[str, Any]:
    values = {}
    for name, (key, convert) in ENVIRONMENT.items():
        raw = environ.get(name)
        if raw is None or raw.strip() == "":
            continue
        try:
            values[key] = convert(raw.strip())
        except ValueError as e:
            raise ConfigError(f"Environment variable {name}={raw!r} is invalid: {e}") from e
    return values


def _from_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        with open(Path(path), "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object, got {type(data).__name__}")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def _validate(config: SimpleNamespace):
    for key in ("root_tol", "event_tol", "contour_tol"):
        value = getattr(config, key)
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
            raise ConfigError(f"{key} must be a positive number, got {value!r}")
    for key, minimum in (("grid", 16), ("workers", 1)):
        value = getattr(config, key)
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            raise ConfigError(f"{key} must be an integer >= {minimum}, got {value!r}")
    if str(config.log_level).upper() not in LOG_LEVELS:
        raise ConfigError(f"log_level must be one of {LOG_LEVELS}, got {config.log_level!r}")
    config.log_level = str(config.log_level).upper()


def load_run_config(args: Any = None, environ: Optional[Mapping[str, str]] = None) -> SimpleNamespace:
    """
    Resolves the run configuration.

    Later sources win: built-in defaults, HAMDEF_* environment variables, the
    JSON file named by ``args.config``, then every flag the user actually gave
    (argparse attributes that are not None).

    Args:
        args: Parsed argparse namespace (or any object with attributes).
        environ: Environment mapping; os.environ if None.

    Returns:
        SimpleNamespace with every resolved key.

    Raises:
        ConfigError: For an unreadable config file or an invalid value.
    """
    merged: Dict[str, Any] = dict(DEFAULTS)
    merged.update(_from_environment(os.environ if environ is None else environ))

    flags = {k: v for k, v in vars(args).items() if v is not None} if args is not None else {}
    merged.update(_from_file(flags.get("config")))
    merged.update(flags)

    config = SimpleNamespace(**merged)
    _validate(config)
    for key, value in sorted(vars(config).items()):
        logger.debug(f"  {key}: {value!r}")
    return config
