"""Tests for the command-line interface."""

from __future__ import annotations

import json

import numpy as np
import pytest

from charvar.cli import build_parser, main
from charvar.const import (
    EXIT_CHECK_FAILED,
    EXIT_HYPOTHESIS_NOT_MET,
    EXIT_INPUT_ERROR,
    EXIT_OK,
)
from charvar.matrixrep import (
    PAULI_X,
    PAULI_Y,
    MatrixRep,
    pi_rotation_fixture,
    random_commuting_tuple,
    random_free_rep,
)


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_analyze_surface_into_general_linear(capsys) -> None:
    code, data = run_json(capsys, "analyze", "--group", "surface 2", "--target", "GL 3")
    assert code == EXIT_OK
    assert data["pi1_moduli"]["value"]["text"] == "Z^4"
    assert data["group"]["class"] == "surface 2"
    assert not data["hypothesis_not_met"]


def test_analyze_torsion_target(capsys) -> None:
    code, out, err = run(capsys, "analyze", "--group", "free 2", "--target", "PSU 2")
    assert code == EXIT_HYPOTHESIS_NOT_MET
    assert json.loads(out)["covering"]["citations"] == ["torsion_counterexample"]
    assert "hypothesis" in err


def test_analyze_free_abelian_into_su2(capsys) -> None:
    code, data = run_json(
        capsys, "analyze", "--group", "free_abelian 3", "--target", "SU 2"
    )
    assert code == EXIT_OK
    assert data["pi1_moduli"]["value"]["text"] == "0"


def test_analyze_text_format(capsys) -> None:
    code, out, _ = run(
        capsys, "analyze", "--group", "surface 2", "--target", "U 2", "--format", "text"
    )
    assert code == EXIT_OK
    assert out.startswith("surface 2 into ")
    assert "pi_1 of moduli" in out
    assert "Citations:" in out


def test_analyze_presentation_file(capsys, tmp_path) -> None:
    path = tmp_path / "torus.txt"
    path.write_text("gens x y;\nrel [x,y];\n", encoding="utf-8")
    code, data = run_json(
        capsys, "analyze", "--presentation", str(path), "--class", "free_abelian 2",
        "--target", "U 1",
    )
    assert code == EXIT_OK
    assert data["group"]["class"] == "free_abelian 2"
    assert data["pi1_moduli"]["value"]["text"] == "Z^2"


def test_class_mismatch_is_input_error(capsys) -> None:
    code, out, err = run(
        capsys, "analyze", "--group", "free 4", "--class", "surface 2", "--target", "U 2"
    )
    assert code == EXIT_INPUT_ERROR
    assert not out
    assert "class" in err


def test_unknown_target(capsys) -> None:
    code, _, err = run(capsys, "analyze", "--group", "free 2", "--target", "XYZ 3")
    assert code == EXIT_INPUT_ERROR
    assert "Invalid parameter" in err


def test_usage_error(capsys) -> None:
    assert main(["analyze", "--group", "free 2"]) == EXIT_INPUT_ERROR
    capsys.readouterr()


def test_group_check(capsys, tmp_path) -> None:
    path = tmp_path / "genus2.txt"
    path.write_text("gens a1 b1 a2 b2;\nrel [a1,b1][a2,b2];\n", encoding="utf-8")
    code, data = run_json(capsys, "group", "check", str(path))
    assert code == EXIT_OK
    assert data["generators"] == ["a1", "b1", "a2", "b2"]
    assert data["abelianization"]["text"] == "Z^4"
    assert data["exponent_canceling"]
    assert data["classes"] == ["surface 2"]


def test_group_check_syntax_error(capsys, tmp_path) -> None:
    path = tmp_path / "broken.txt"
    path.write_text("gens a;\nrel a $;\n", encoding="utf-8")
    code, _, err = run(capsys, "group", "check", str(path))
    assert code == EXIT_INPUT_ERROR
    assert "syntax" in err


def test_lie_info(capsys) -> None:
    code, data = run_json(capsys, "lie", "info", "SO 3")
    assert code == EXIT_OK
    assert data["pi1"]["text"] == "Z/2"
    assert data["unitary_type"] is None
    code, out, _ = run(capsys, "lie", "info", "U 2", "--format", "text")
    assert "Unitary type" in out


def test_verify_obstruction(capsys, write_json) -> None:
    path = write_json("pi.json", pi_rotation_fixture().as_dict())
    code, data = run_json(
        capsys, "verify", "--mode", "obstruction", "--group", "surface 1",
        "--matrices", str(path),
    )
    assert code == EXIT_OK
    assert data["data"] == {"class": 1, "modulus": 2}


def test_verify_lift(capsys, write_json, rng) -> None:
    path = write_json("free.json", random_free_rep(2, 2, rng).as_dict())
    code, data = run_json(
        capsys, "verify", "--mode", "lift", "--group", "free 2", "--matrices", str(path)
    )
    assert code == EXIT_OK
    assert [check["name"] for check in data["checks"]] == ["relators", "lift_relators", "round_trip"]
    assert data["data"]["lift"]["generators"] == ["a", "b"]


def test_verify_check_failure(capsys, write_json) -> None:
    rep = MatrixRep("U 2", ("a", "b"), [PAULI_X, PAULI_Y])
    path = write_json("pauli.json", rep.as_dict())
    code, out, err = run(
        capsys, "verify", "--group", "free_abelian 2", "--matrices", str(path)
    )
    assert code == EXIT_CHECK_FAILED
    assert not json.loads(out)["passed"]
    assert "failed" in err


def test_verify_wrong_generators(capsys, write_json) -> None:
    path = write_json("pi.json", pi_rotation_fixture().as_dict())
    code, _, _ = run(capsys, "verify", "--group", "free_abelian 2", "--matrices", str(path))
    assert code == EXIT_INPUT_ERROR


def test_verify_deck(capsys, write_json) -> None:
    rep = random_commuting_tuple(2, 2, seed=4)[0]
    path = write_json("pair.json", rep.as_dict())
    code, data = run_json(
        capsys, "verify", "--mode", "deck", "--group", "free_abelian 2",
        "--matrices", str(path), "--deck=1,-1",
    )
    assert code == EXIT_OK
    assert data["data"]["deck"] == [1, -1]
    shift = np.array(data["data"]["lift"]["real_parts"]) - [
        np.angle(np.linalg.det(m)) / 2 for m in rep.matrices
    ]
    assert np.allclose(shift, [np.pi, -np.pi])


def test_verify_deck_needs_exponent_canceling(capsys, write_json, tmp_path) -> None:
    presentation = tmp_path / "z2.txt"
    presentation.write_text("gens a; rel a^2;\n", encoding="utf-8")
    path = write_json("one.json", MatrixRep("U 1", ("a",), [[[1.0]]]).as_dict())
    code, _, err = run(
        capsys, "verify", "--mode", "deck", "--presentation", str(presentation),
        "--matrices", str(path), "--deck", "1",
    )
    assert code == EXIT_INPUT_ERROR
    assert "exponent-canceling" in err


def test_sample_mode(capsys) -> None:
    code, data = run_json(
        capsys, "verify", "--mode", "sample", "--suite", "deck", "--count", "2", "--seed", "5"
    )
    assert code == EXIT_OK
    assert [suite["name"] for suite in data["suites"]] == ["deck"]
    assert data["suites"][0]["samples"] == 2
    assert data["data"]["seed"] == 5


def test_sample_mode_is_deterministic(capsys) -> None:
    argv = ("verify", "--mode", "sample", "--suite", "canonical_form", "--count", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv, "--workers", "1")
    assert first == second


def test_output_file(capsys, tmp_path) -> None:
    target = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "analyze", "--group", "free 2", "--target", "U 2", "--output", str(target)
    )
    assert code == EXIT_OK
    assert not out
    assert json.loads(target.read_text(encoding="utf-8"))["pi1_moduli"]["status"] == "known"
    assert [path.name for path in tmp_path.iterdir()] == ["report.json"]


def test_output_is_deterministic(capsys) -> None:
    argv = ("analyze", "--group", "surface 3", "--target", "SU 2 x torus 1")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_environment_tolerance(capsys, monkeypatch) -> None:
    monkeypatch.setenv("CHARVAR_TOL", "not-a-number")
    code, _, err = run(capsys, "group", "check", "missing.txt")
    assert code == EXIT_INPUT_ERROR
    assert "CHARVAR_TOL" in err


def test_parser_requires_command() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_version(capsys) -> None:
    code, out, _ = run(capsys, "--version")
    assert code == EXIT_OK
    assert out.strip() == "charvar 1.0.0"
