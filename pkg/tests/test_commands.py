import json

import pytest

import run
from src.brauer.tduality import NONCOMMUTATIVE
from src.commands.commands import (EXIT_FAILURES, EXIT_INPUT_ERROR, EXIT_OK, cmd_check, cmd_classify, cmd_fell_demo,
                                   cmd_obstruction, cmd_selftest, cmd_tdual)
from src.serialisation import dumps, read_json

QUARTER = {"num": 1, "den": 4}

CLASSIFY_PAYLOAD = {"omega": {"form": "standard", "theta_hat": [[0, QUARTER, 0], [0, 0, 0], [0, 0, 0]]},
                    "U": {"c": [1], "integral": True}}


def write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def test_check_passes_with_exit_zero():
    report, code = cmd_check("crossed-module", {"random": {"n": 3, "count": 20}})
    assert code == EXIT_OK
    assert report["passed"] and report["samples"] == 20


def test_check_failures_exit_one():
    report, code = cmd_check("coherence", {"random": {"n": 3, "count": 5}, "associator_sign": 1})
    assert code == EXIT_FAILURES
    assert "omega_iota_cocycle" in {failure["condition"] for failure in report["failures"]}

    payload = {"omega": {"form": "standard", "theta_hat": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]},
               "U": {"c": [{"num": 1, "den": 2}]}, "box": 1}
    report, code = cmd_check("fiber-action", payload)
    assert code == EXIT_FAILURES
    assert report["header"]["violations"]["lattice_trivial"] == 1


def test_check_induced_rep_reports_phases():
    payload = {"action": {"omega": {"form": "standard", "theta_hat": [[0, QUARTER], [0, 0]]}, "U": {"c": []}},
               "N": 4, "samples": 5}
    report, code = cmd_check("induced-rep", payload)
    assert code == EXIT_OK
    assert report["header"]["commutation_phases"][0][1] == {"num": 1, "den": 4}


def test_check_strict_action():
    report, code = cmd_check("strict-action", {"weyl": 3, "samples": 10})
    assert code == EXIT_OK
    assert report["law"] == "strict-action"


def test_malformed_check_input_raises_value_error():
    with pytest.raises(ValueError):
        cmd_check("crossed-module", {"samples": [{"g": {}}]})
    with pytest.raises(ValueError):
        cmd_check("pentagon", {})
    with pytest.raises(ValueError):
        cmd_check("coherence", [1, 2, 3])


def test_classify_is_deterministic():
    first, code = cmd_classify(CLASSIFY_PAYLOAD)
    second, _ = cmd_classify(CLASSIFY_PAYLOAD)
    assert code == EXIT_OK
    assert dumps(first) == dumps(second)
    assert first["m"] == [1] and first["dd"] == [1]
    assert first["theta"][0][1] == QUARTER
    assert first["conventions"] == {"subtorus_sign": 1, "dd_sign": 1}


def test_classify_rejects_invalid_actions():
    payload = {"omega": {"form": "standard", "theta_hat": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]},
               "U": {"c": [{"num": 1, "den": 3}]}}
    with pytest.raises(ValueError):
        cmd_classify(payload)


def test_obstruction_command():
    result, code = cmd_obstruction({"n": 4, "subtori": [[1, 3, 4]], "dd": {"p": [1], "q": [0]}})
    assert code == EXIT_OK
    assert not result["liftable"]
    assert result["pointwise"] == {"p": False, "q": True}
    assert result["obstruction"]["points"]["p"] == [0, 0, 1, 0]
    with pytest.raises(ValueError):
        cmd_obstruction({"dd": {"p": [1]}})


def test_tdual_command():
    classes = {vertex: {"n": 2, "m": [], "theta": [[0, {"num": k, "den": 4}], [{"num": -k, "den": 4}, 0]]}
               for k, vertex in enumerate("abcd")}
    payload = {"vertices": list("abcd"), "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]],
               "loops": [list("abcd")], "classes": classes}
    result, code = cmd_tdual(payload)
    assert code == EXIT_OK
    assert result["verdict"] == NONCOMMUTATIVE
    assert result["evidence"]["loops"][0]["winding"] == [1]


def test_fell_demo_saves_tables(tmp_path):
    result, code = cmd_fell_demo(n=3, N=3, m=[1], suite="associator", save=str(tmp_path / "sections.zarr"))
    assert code == EXIT_OK
    assert result["passed"]
    assert result["orientation"] == -1
    assert result["saved"].endswith("sections.zarr")


def test_selftest_command():
    summary, code = cmd_selftest(["exterior", "cohomology"], progress=False)
    assert code == EXIT_OK
    assert set(summary["suites"]) == {"exterior", "cohomology"}


def test_selftest_rejects_unknown_suite():
    with pytest.raises(ValueError):
        cmd_selftest(["pentagon"], progress=False)


def test_main_writes_json_out(tmp_path, capsys):
    source = write(tmp_path / "samples.json", {"random": {"n": 3, "count": 10}})
    target = str(tmp_path / "out" / "report.json")
    assert run.main(["check", "crossed-module", source, "--json-out", target]) == EXIT_OK
    assert read_json(target)["passed"]
    assert "crossed-module: 10 samples, 0 failures" in capsys.readouterr().out


def test_main_prints_json_to_stdout(tmp_path, capsys):
    source = write(tmp_path / "action.json", CLASSIFY_PAYLOAD)
    assert run.main(["classify", source]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["m"] == [1]


def test_main_returns_two_on_bad_input(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run.main(["classify", str(broken)]) == EXIT_INPUT_ERROR
    assert run.main(["tdual", str(tmp_path / "missing.json")]) == EXIT_INPUT_ERROR
    assert "Input error" in capsys.readouterr().err


def test_main_returns_one_on_failures(tmp_path):
    source = write(tmp_path / "coherence.json", {"random": {"n": 3, "count": 5}, "associator_sign": 1})
    assert run.main(["--mode", "exact", "check", "coherence", source]) == EXIT_FAILURES
