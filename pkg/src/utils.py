import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Callable, Iterable, List, Optional, TypeVar

import numpy as np
import sympy as sp
from tqdm import tqdm

logger = logging.getLogger("HamDef.Utils") # Use a specific logger

T = TypeVar("T")
R = TypeVar("R")


# Logger setup function
def setup_logging(level=logging.INFO, log_file_name="hamdef.log", log_dir: Optional[str] = "logs"):
    """
    Configures the application logger.

    Args:
        level: The console logging level (e.g., logging.INFO, logging.DEBUG).
        log_file_name: The name for the log file.
        log_dir: Directory for the log file; None disables file logging.

    Returns:
        The configured logger instance.
    """
    logger = logging.getLogger("HamDef")
    # Prevent duplicate handlers if called multiple times
    if logger.handlers:
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(level)
        logger.debug("Logger already configured. Updated console level only.")
        return logger

    logger.propagate = False # Don't pass logs to the root logger
    logger.setLevel(logging.DEBUG) # Handlers filter

    # Console Handler; stdout carries the JSON reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_formatter = logging.Formatter(
        "%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%H:%M:%S"
    )
    console_handler.setFormatter(console_formatter)
    console_handler.setLevel(level)
    logger.addHandler(console_handler)

    # File Handler (DEBUG level to capture everything)
    file_handler = None
    if log_dir is not None:
        try:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            log_file_path = log_path / log_file_name
            file_handler = logging.FileHandler(log_file_path, mode='a', encoding='utf-8')
            file_formatter = logging.Formatter(
                "%(asctime)s - %(levelname)-8s - %(name)-25s - %(funcName)-20s - %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S"
            )
            file_handler.setFormatter(file_formatter)
            file_handler.setLevel(logging.DEBUG)
            logger.addHandler(file_handler)
            logger.debug(f"Logging initialized. Console Level: {logging.getLevelName(level)}. Log file: {log_file_path}")
        except Exception as e:
            logger.error(f"Failed to initialize file logging: {e}", exc_info=False)
            file_handler = None

    # Capture warnings issued by numpy/sympy and by our own render warnings
    logging.captureWarnings(True)
    warnings_logger = logging.getLogger("py.warnings")
    if not warnings_logger.handlers:
        warnings_logger.addHandler(console_handler)
        if file_handler is not None:
            warnings_logger.addHandler(file_handler)
    warnings_logger.setLevel(logging.WARNING)

    # Silence overly verbose loggers from dependencies
    verbose_loggers = ["matplotlib", "numba", "sympy", "PIL"]
    for logger_name in verbose_loggers:
        dep_logger = logging.getLogger(logger_name)
        if dep_logger.level < logging.WARNING:
            dep_logger.setLevel(logging.WARNING)

    return logger


def run_parallel(func: Callable[[T], R], items: Iterable[T], workers: int = 1, desc: str = "Working") -> List[R]:
    """
    Maps func over items on a thread pool and returns results in input order.

    Args:
        func: Function applied to every item.
        items: Work items.
        workers: Pool size; 1 runs inline.
        desc: Progress bar label.

    Returns:
        [func(item) for item in items], independent of completion order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    results: List[Optional[R]] = [None] * len(items)
    show_progress = sys.stderr.isatty()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(func, item): index for index, item in enumerate(items)}
        for future in tqdm(as_completed(futures), total=len(futures), desc=desc, disable=not show_progress, leave=False):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"{desc}: item {index} failed: {e}")
                for pending in futures:
                    pending.cancel()
                raise
    return results


def format_number(value: float) -> str:
    """Round-trip safe text for a finite float (17 significant digits)."""
    if not math.isfinite(value):
        raise ValueError(f"Non-finite number {value!r} cannot be written as JSON")
    return f"{value:.17g}"


def _dump(obj: Any, level: int) -> str:
    # json.dumps writes floats through float.__repr__; numbers here need 17 significant digits
    pad = "  " * (level + 1)
    end = "  " * level
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer, sp.Integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating, sp.Rational, sp.Float)):
        return format_number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(((str(k), v) for k, v in obj.items()), key=lambda kv: kv[0])
        body = ",\n".join(f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(v, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(f"{pad}{_dump(v, level + 1)}" for v in obj)
        return "[\n" + body + "\n" + end + "]"
    if hasattr(obj, "to_json"):
        return _dump(obj.to_json(), level)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def to_json_text(obj: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, floats with 17 significant digits."""
    return _dump(obj, 0) + "\n"
