import json
from types import SimpleNamespace

import pytest

from config import DEFAULTS, ConfigError, load_run_config


def test_defaults():
    config = load_run_config(None, environ={})
    assert config.grid == DEFAULTS["grid"]
    assert config.root_tol == 1e-12
    assert config.log_level == "WARNING"


def test_environment_overrides_defaults():
    config = load_run_config(None, environ={"HAMDEF_GRID": "64", "HAMDEF_LOG_LEVEL": "debug", "HAMDEF_OUT_DIR": " "})
    assert config.grid == 64
    assert config.log_level == "DEBUG"
    assert config.out == DEFAULTS["out"]


def test_file_then_flags(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"grid": 128, "event-tol": 1e-6, "workers": 2}), encoding="utf-8")
    args = SimpleNamespace(config=str(path), grid=32, workers=None)
    config = load_run_config(args, environ={"HAMDEF_GRID": "64"})
    assert config.grid == 32
    assert config.event_tol == 1e-6
    assert config.workers == 2


@pytest.mark.parametrize("environ", [
    {"HAMDEF_WORKERS": "many"},
    {"HAMDEF_WORKERS": "0"},
    {"HAMDEF_GRID": "4"},
    {"HAMDEF_LOG_LEVEL": "chatty"},
])
def test_invalid_environment(environ):
    with pytest.raises(ConfigError):
        load_run_config(None, environ=environ)


def test_invalid_files(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(SimpleNamespace(config=str(tmp_path / "missing.json")), environ={})
    broken = tmp_path / "broken.json"
    broken.write_text("{grid: 1", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_run_config(SimpleNamespace(config=str(broken)), environ={})
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_run_config(SimpleNamespace(config=str(listed)), environ={})


def test_tolerances_must_be_positive():
    with pytest.raises(ConfigError):
        load_run_config(SimpleNamespace(root_tol=0.0), environ={})
