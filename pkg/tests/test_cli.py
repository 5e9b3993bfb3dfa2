"""Command-line interface: subcommands, JSON contracts, exit codes."""

import json

import pytest

from accesskit.cli import EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_POLE, main
from conftest import SYSTEMS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out) if out.strip() else None
    return code, doc


def path(name):
    return str(SYSTEMS / f"{name}.sys")


COIL_BIND = ("--bind", "T=1/10,a=1,b=1")


class TestCheck:
    def test_coil(self, capsys):
        code, doc = run(capsys, "check", path("coil"))
        assert code == EXIT_OK
        assert doc["submersive"] and doc["generically_accessible"]
        assert doc["tool"] == "accesskit"
        assert len(doc["input_sha256"]) == 64

    def test_drift_not_accessible(self, capsys):
        code, doc = run(capsys, "check", path("drift"))
        assert code == EXIT_OK
        assert doc["submersive"] and not doc["generically_accessible"]
        assert "not generically accessible" in doc["verdict"]


class TestIndexAndSingular:
    def test_coil_index(self, capsys):
        code, doc = run(capsys, "index", path("coil"))
        assert code == EXIT_OK
        assert doc["kappa"] == 3
        assert doc["singular_set"]["kind"] == "points"
        assert doc["singular_set"]["points"] == [["0", "0"]]
        assert [c["k"] for c in doc["chain"]] == [2, 3]

    def test_exact_radical_flag(self, capsys):
        code, doc = run(
            capsys, "index", path("rational2d"), "--exact-radical"
        )
        assert code == EXIT_OK
        assert doc["r_star"] == 3
        assert doc["r_star_certified"] is True

    def test_fivestep_singular(self, capsys):
        code, doc = run(capsys, "singular", path("fivestep"))
        assert code == EXIT_OK
        assert doc["kappa"] == 6
        assert doc["singular_set"]["points"] == [["0", "0"]]

    def test_integrator_empty(self, capsys):
        code, doc = run(capsys, "singular", path("integrator"))
        assert code == EXIT_OK
        assert doc["singular_set"]["kind"] == "empty"

    def test_max_k_budget_exhaustion(self, capsys):
        code, doc = run(capsys, "index", path("fivestep"), "--max-k", "3")
        assert code == EXIT_BUDGET
        assert doc["budget_exhausted"] is True

    def test_json_deterministic(self, capsys):
        _, a = run(capsys, "index", path("coil"))
        _, b = run(capsys, "index", path("coil"))
        a.pop("elapsed_seconds")
        b.pop("elapsed_seconds")
        assert a == b


class TestPoint:
    def test_origin_in_singular_set(self, capsys):
        code, doc = run(
            capsys, "point", path("coil"), "--x", "0,0", "--k", "3"
        )
        assert code == EXIT_OK
        assert doc["in_S_k"] is True
        assert "not accessible" in doc["verdict"]

    def test_rational_coordinates(self, capsys):
        code, doc = run(
            capsys, "point", path("fivestep"), "--x", "1/2,1/3", "--k", "2"
        )
        assert code == EXIT_OK
        assert doc["point"] == ["1/2", "1/3"]
        assert doc["in_S_k"] is False

    def test_wrong_dimension(self, capsys):
        code, _ = run(capsys, "point", path("coil"), "--x", "1", "--k", "2")
        assert code == EXIT_PARSE


class TestNumeric:
    def test_simulate(self, capsys):
        code, doc = run(
            capsys,
            "simulate",
            path("fivestep"),
            "--x",
            "0,1",
            "--u",
            "1;1;1",
        )
        assert code == EXIT_OK
        assert doc["states"][1] == [1.0, 1.0]
        assert doc["states"][2] == [1.0, 0.0]

    def test_simulate_pole_exit_code(self, capsys):
        code, _ = run(
            capsys, "simulate", path("rational2d"), "--x", "1,0", "--u", "-1"
        )
        assert code == EXIT_POLE

    def test_rank(self, capsys):
        code, doc = run(
            capsys,
            "rank",
            path("coil"),
            *COIL_BIND,
            "--x",
            "1,1",
            "--k",
            "2",
        )
        assert code == EXIT_OK
        assert doc["rank"] == 2
        assert doc["certification"] == "sampled"

    def test_scan1d(self, capsys):
        code, doc = run(
            capsys,
            "scan1d",
            path("sinemap"),
            "--k",
            "2",
            "--grid",
            "0.05",
            "--samples",
            "16",
        )
        assert code == EXIT_OK
        assert doc["certification"] == "estimate"
        assert doc["levels"][0]["flagged"] == [0.0, 1.0, 2.0]
        assert doc["levels"][1]["flagged"] == [0.0, 2.0]


class TestBackward:
    def test_inverse_coil(self, capsys):
        code, doc = run(capsys, "backward", "--inverse", path("coil_reversed"))
        assert code == EXIT_OK
        assert doc["mode"] == "backward"
        assert doc["kappa"] == 3
        assert doc["singular_set"]["points"] == [["0", "0"]]


class TestErrors:
    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.sys"
        bad.write_text("system t\nstates x\ninputs u\nx' = x + y\n")
        code, _ = run(capsys, "check", str(bad))
        assert code == EXIT_PARSE

    def test_symbolic_command_on_numeric_file(self, capsys):
        code, _ = run(capsys, "index", path("sinemap"))
        assert code == EXIT_PARSE

    def test_bad_bind(self, capsys):
        code, _ = run(capsys, "check", path("coil"), "--bind", "nonsense")
        assert code == EXIT_PARSE
