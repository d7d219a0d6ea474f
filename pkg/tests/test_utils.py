import json
import time

import numpy as np
import pytest
import sympy as sp

from utils import format_number, run_parallel, to_json_text


def test_run_parallel_keeps_input_order():
    def slow_square(k):
        time.sleep(0.01 * (5 - k % 5))
        return k * k

    assert run_parallel(slow_square, range(12), workers=4) == [k * k for k in range(12)]


def test_run_parallel_reraises():
    def fail_on_three(k):
        if k == 3:
            raise ValueError("three")
        return k

    with pytest.raises(ValueError):
        run_parallel(fail_on_three, range(6), workers=3)


def test_json_text_is_deterministic():
    text = to_json_text({"b": [1, 0.1], "a": sp.Rational(1, 4), "c": None})
    assert text == '{\n  "a": 0.25,\n  "b": [\n    1,\n    0.10000000000000001\n  ],\n  "c": null\n}\n'


def test_json_text_parses_back():
    obj = {"z": np.float64(0.1), "a": [np.int64(3), sp.Rational(-1, 8)], "t": (True, None)}
    assert json.loads(to_json_text(obj)) == {"a": [3, -0.125], "t": [True, None], "z": 0.1}


def test_format_number_rejects_non_finite():
    assert format_number(0.5) == "0.5"
    with pytest.raises(ValueError):
        format_number(float("inf"))


def test_file_manager_names_and_cleanup(files):
    path = files.write_text("fig4 frame/01", ".svg", "<svg/>\n")
    assert path.name == "fig4_frame_01.svg"
    assert path.read_text(encoding="utf-8") == "<svg/>\n"
    files.cleanup()
    assert not path.exists()
