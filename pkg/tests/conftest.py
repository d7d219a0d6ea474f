import logging
import random
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from file_manager import FileManager  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240521)


@pytest.fixture
def files(tmp_path):
    return FileManager(str(tmp_path / "output"))


@pytest.fixture
def hamdef_log(caplog):
    """caplog that also sees the HamDef logger after setup_logging turned propagation off."""
    logger = logging.getLogger("HamDef")
    logger.addHandler(caplog.handler)
    caplog.set_level(logging.DEBUG, logger="HamDef")
    yield caplog
    logger.removeHandler(caplog.handler)
