import json
import logging
from typing import Any
from typing import List
from typing import Tuple

import pytest

from projendo.__about__ import __version__
from projendo.cli import build_parser
from projendo.cli import configure_logging
from projendo.cli import run
from projendo.constants import LOG_LEVEL_ENV_VAR
from projendo.exceptions import ERRORS_BY_CODE
from projendo.exceptions import OracleGuardError
from tests.test_utils import data_path


def invoke(capsys: pytest.CaptureFixture, argv: List[str]) -> Tuple[int, Any]:
    status = run(argv)
    return status, json.loads(capsys.readouterr().out)


class TestMapCommands:
    @pytest.mark.parametrize(
        "file_name,tag", [("torus3.json", "TorusForm"), ("boundary3.json", "Boundary"), ("closed3.json", "Closed")]
    )
    def test_classify(self, capsys: pytest.CaptureFixture, file_name: str, tag: str) -> None:
        status, document = invoke(capsys, ["classify", "--map", data_path("maps", file_name)])
        assert status == 0
        assert document["tag"] == tag

    def test_classify_reduced_map(self, capsys: pytest.CaptureFixture) -> None:
        # (x0^2, x0 x1) reduces to the identity, which has degree 1
        status, document = invoke(capsys, ["classify", "--map", data_path("maps", "irregular2.json")])
        assert status == 2
        assert document["error"] == "invalid-parameter"
        assert "degree at least 2" in document["detail"]

    def test_regular(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["regular", "--map", data_path("maps", "irregular2.json")])
        assert status == 0
        assert document == {"regularity": "certified-irregular", "method": "sylvester"}

    def test_ramification(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["ramification", "--map", data_path("maps", "boundary3.json")])
        assert status == 0
        assert document["form"]["degree"] == 4
        assert document["factorization"]["point_count"] == 3

    def test_branch(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["branch", "--map", data_path("maps", "torus3.json")])
        assert status == 0
        assert document["form"]["terms"] == [[[2, 2], {"field": ["0", "1"], "coords": ["1"]}]]

    def test_torus_check(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["torus-check", "--map", data_path("maps", "irregular2.json"), "--weights", "0,1"]
        status, document = invoke(capsys, argv)
        assert status == 0
        assert document["fixed"] is True

    @pytest.mark.parametrize("c,b,tag", [("-1", "-3", "RegularLimit"), ("1", "3", "ConstantOrDegenerate")])
    def test_limit(self, capsys: pytest.CaptureFixture, c: str, b: str, tag: str) -> None:
        status, document = invoke(capsys, ["limit", "--map", data_path("maps", "boundary3.json"), "-c", c, "-b", b])
        assert status == 0
        assert document["tag"] == tag

    def test_fixed_maps(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["fixed-maps", "--matrix", data_path("matrices", "jordan.json"), "--degree", "3"]
        status, document = invoke(capsys, argv)
        assert status == 0
        assert len(document["eigenspaces"]) == 1
        assert document["eigenspaces"][0]["verdict"] != "contains-a-regular-map"

    def test_pair_fixed_maps(self, capsys: pytest.CaptureFixture) -> None:
        argv = [
            "fixed-maps",
            "--matrix",
            data_path("matrices", "diag_1_2.json"),
            "--pair-with",
            data_path("matrices", "diag_1_8.json"),
            "--degree",
            "3",
        ]
        status, document = invoke(capsys, argv)
        assert status == 0
        verdicts = [e["verdict"] for e in document["eigenspaces"]]
        assert verdicts.count("contains-a-regular-map") == 1


class TestGroupCommands:
    def test_invariants(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["invariants", "--builtin", "signed-swap", "--degree", "4"])
        assert status == 0
        assert document["dim"] == 2

    def test_smooth_invariant(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["invariants", "--group", data_path("groups", "signed_swap.json"), "--degree", "4", "--smooth"]
        status, document = invoke(capsys, argv)
        assert status == 0
        assert document["smooth_invariant"]["degree"] == 4

    def test_equivariant_to_file(self, capsys: pytest.CaptureFixture, tmp_path: Any) -> None:
        output = tmp_path / "endomorphism.json"
        status = run(["--output", str(output), "equivariant", "--builtin", "signed-swap", "--degree", "4"])
        assert status == 0
        assert capsys.readouterr().out == ""
        document = json.loads(output.read_text())
        assert document["endomorphism"]["degree"] == 9
        assert len(document["verification"]) == 8
        assert all(entry["passed"] for entry in document["verification"])

    def test_group_cap(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["invariants", "--group", data_path("groups", "cube_capped.json"), "--degree", "2"]
        status, document = invoke(capsys, argv)
        assert status == 2
        assert document["error"] == "group-enumeration"

    def test_budget_flag(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["--budget", "0", "invariants", "--builtin", "signed-swap", "--degree", "4", "--smooth"]
        status, document = invoke(capsys, argv)
        assert status == 2
        assert document["error"] == "search-budget-exhausted"

    def test_no_invariants(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["equivariant", "--builtin", "signed-swap", "--degree", "3"])
        assert status == 2
        assert document["error"] == "no-invariants"

    def test_group_source_required(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["invariants", "--degree", "2"])
        assert status == 2
        assert document["error"] == "invalid-parameter"

    def test_flags_after_subcommand(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["equivariant", "--builtin", "signed-swap", "--degree", "4", "--seed", "0", "--budget", "200"]
        status, document = invoke(capsys, argv)
        assert status == 0
        assert document["endomorphism"]["degree"] == 9

    def test_budget_after_subcommand(self, capsys: pytest.CaptureFixture) -> None:
        argv = ["equivariant", "--builtin", "cube-rotation", "--degree", "4", "--budget", "0"]
        status, document = invoke(capsys, argv)
        assert status == 2
        assert document["error"] == "search-budget-exhausted"

    def test_output_after_subcommand(self, capsys: pytest.CaptureFixture, tmp_path: Any) -> None:
        output = tmp_path / "invariants.json"
        assert run(["invariants", "--builtin", "signed-swap", "--degree", "4", "--output", str(output)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(output.read_text())["dim"] == 2

    @pytest.mark.parametrize("position", [0, 3])
    def test_invalid_cap(self, capsys: pytest.CaptureFixture, position: int) -> None:
        argv = ["invariants", "--builtin", "signed-swap", "--degree", "2"]
        argv[position:position] = ["--cap", "0"]
        status, document = invoke(capsys, argv)
        assert status == 2
        assert document["error"] == "invalid-parameter"


class TestCountHoms:
    def test_formula(self, capsys: pytest.CaptureFixture) -> None:
        assert invoke(capsys, ["count-homs", "--family", "A4", "--genus", "1"]) == (0, 48)

    def test_oracle(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["count-homs", "--family", "S3", "--genus", "2", "--oracle"])
        assert status == 0
        assert document["count"] == 486
        assert document["oracle"] == 486
        assert document["agree"] is True

    def test_oracle_guard(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["count-homs", "--family", "A5", "--genus", "2", "--oracle"])
        assert status == 2
        assert document["error"] == "oracle-guard"

    def test_unknown_family(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["count-homs", "--family", "S5", "--genus", "1"])
        assert status == 2
        assert "S5" in document["detail"]

    def test_plain_integer(self, capsys: pytest.CaptureFixture) -> None:
        assert run(["count-homs", "--family", "cyclic", "-n", "3", "--genus", "1"]) == 0
        assert capsys.readouterr().out == "9\n"

    @pytest.mark.parametrize("position", ["before", "after"])
    def test_verbose_breakdown(self, capsys: pytest.CaptureFixture, position: str) -> None:
        argv = ["count-homs", "--family", "S3", "--genus", "2"]
        argv = ["--verbose"] + argv if position == "before" else argv + ["--verbose"]
        status, document = invoke(capsys, argv)
        assert status == 0
        assert document["genus"] == 2
        assert document["terms"] == [[1, "36"], [1, "36"], [2, "9"]]
        assert document["count"] == 486
        assert "oracle" not in document


class TestChow:
    def test_check_all(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["chow", "--check", "all"])
        assert status == 0
        assert document["passed"] is True

    def test_corrupt_relation(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["chow", "--check", "all", "--corrupt-relation"])
        assert status == 1
        assert document["passed"] is False

    @pytest.mark.parametrize("expansion", ["c2-twist", "twist-degree", "ramification", "pullback"])
    def test_symbolic_expansion(self, capsys: pytest.CaptureFixture, expansion: str) -> None:
        status, document = invoke(capsys, ["chow", "--expand", expansion, "-k", "k"])
        assert status == 0
        assert document["k"] == "k"

    def test_twist_degree(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["chow", "--expand", "twist-degree", "-k", "3"])
        assert status == 0
        assert document["result"]["class"] == "3/2*c1E - 1/2*c1F"

    def test_vacuous_pullback(self, capsys: pytest.CaptureFixture) -> None:
        status, document = invoke(capsys, ["chow", "--expand", "pullback", "-k", "1"])
        assert status == 2
        assert document["error"] == "degenerate-system"


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["unknown"],
            ["torus-check", "--map", "x.json", "--weights", "a,b"],
            ["chow", "--expand", "c2-twist", "-k", "n"],
            ["limit", "--map", "missing.json", "-c", "1", "-b", "1"],
        ],
    )
    def test_invalid_parameters(self, capsys: pytest.CaptureFixture, argv: List[str]) -> None:
        status, document = invoke(capsys, argv)
        assert status == 2
        assert document["error"] == "invalid-parameter"

    def test_malformed_json(self, capsys: pytest.CaptureFixture, tmp_path: Any) -> None:
        path = tmp_path / "map.json"
        path.write_text("{not json")
        status, document = invoke(capsys, ["classify", "--map", str(path)])
        assert status == 2
        assert document["error"] == "schema"

    def test_version(self, capsys: pytest.CaptureFixture) -> None:
        with pytest.raises(SystemExit) as exit_info:
            run(["--version"])
        assert exit_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_error_codes_in_help(self, capsys: pytest.CaptureFixture) -> None:
        epilog = build_parser().epilog
        assert all(code in epilog for code in ERRORS_BY_CODE)
        status, document = invoke(capsys, ["count-homs", "--family", "A5", "--genus", "2", "--oracle"])
        assert ERRORS_BY_CODE[document["error"]] is OracleGuardError
        assert status == OracleGuardError.EXIT_STATUS


class TestLogging:
    @pytest.mark.parametrize(
        "value,level", [("info", logging.INFO), ("DEBUG", logging.DEBUG), ("bogus", logging.WARNING)]
    )
    def test_level_from_environment(self, monkeypatch: pytest.MonkeyPatch, value: str, level: int) -> None:
        monkeypatch.setenv(LOG_LEVEL_ENV_VAR, value)
        configure_logging(verbose=False)
        assert logging.getLogger().level == level

    def test_verbose(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(LOG_LEVEL_ENV_VAR, "ERROR")
        configure_logging(verbose=True)
        assert logging.getLogger().level == logging.DEBUG
