import json
from fractions import Fraction

import numpy as np
import pytest

from config.load_configs import CHECK_CONFIG, FELL_BUNDLE_CONFIG
from src.exterior import MultiVector
from src.reports import CheckReport
from src.serialisation import create_unique_directory_file, dumps, encode_value, read_json, write_json


def test_encode_value_handles_library_types():
    payload = {"x": Fraction(1, 2), "k": np.array([1, 2]), "z": 1 + 2j, "v": MultiVector.vector([1, 0])}
    assert encode_value(payload) == {"x": {"num": 1, "den": 2}, "k": [1, 2], "z": [1.0, 2.0],
                                     "v": {"n": 2, "grade": 1, "coeffs": [1, 0]}}


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": Fraction(2, 1)}) == json.dumps({"a": 2, "b": 1}, sort_keys=True, indent=2)


def test_unique_paths(tmp_path):
    path = str(tmp_path / "run")
    assert create_unique_directory_file(path) == path
    (tmp_path / "run").mkdir()
    assert create_unique_directory_file(path) == path + "_(1)"


def test_json_files(tmp_path):
    path = str(tmp_path / "nested" / "result.json")
    write_json({"phase": Fraction(1, 3)}, path)
    assert read_json(path) == {"phase": {"num": 1, "den": 3}}
    with pytest.raises(FileNotFoundError):
        read_json(str(tmp_path / "absent.json"))


def test_report_failures_are_sorted_and_merged():
    report = CheckReport("law", {"box": 2})
    report.count(3)
    report.fail({"k": np.array([2])}, Fraction(1, 2), "b")
    report.fail({"k": np.array([1])}, 0.25, "a")
    payload = report.to_json()
    assert not payload["passed"]
    assert [failure["condition"] for failure in payload["failures"]] == ["a", "b"]

    total = CheckReport("total")
    total.record_residual("x", 0.5)
    other = CheckReport("other")
    other.record_residual("x", 0.1)
    total.merge(report, prefix="law").merge(other)
    assert total.samples == 3
    assert {failure["condition"] for failure in total.failures} == {"law:a", "law:b"}
    assert total.residuals == {"x": 0.5}


def test_default_configs_are_loaded():
    assert CHECK_CONFIG.coherence_samples == 500
    assert CHECK_CONFIG.crossed_module_samples == 1000
    assert FELL_BUNDLE_CONFIG.N == 4
    assert FELL_BUNDLE_CONFIG.m == [1]
