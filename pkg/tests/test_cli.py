"""Test the command-line front end: output, JSON mode and exit codes."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import cli
import fomlogic
import suites
from errors import VerificationError
from settings import override

MODEL_DIR = Path(__file__).resolve().parent.parent
INC = str(MODEL_DIR / "data" / "machines" / "inc.mm")
ADDER = str(MODEL_DIR / "data" / "machines" / "adder.mm")
MAJORITY = str(MODEL_DIR / "data" / "fom" / "majority.fom")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


class TestFormulas:
    """eval, binom, height."""

    def test_eval(self, capsys):
        assert run(capsys, "eval", "monus(5,3)")[:2] == (0, "2")

    def test_eval_env(self, capsys):
        assert run(capsys, "eval", "add(x, y)", "--env", "x=2,y=40")[:2] == (0, "42")

    def test_eval_json_is_decimal_string(self, capsys):
        code, out, _ = run(capsys, "eval", "pow2(70)", "--json")
        assert code == 0
        assert json.loads(out) == {"value": str(2 ** 70)}

    def test_binom(self, capsys):
        assert run(capsys, "binom", "4", "2")[:2] == (0, "6")

    def test_height(self, capsys):
        assert run(capsys, "height", "pow2(pow2(x))")[:2] == (0, "exp2 height 3")

    def test_syntax_error_is_usage(self, capsys):
        code, _, err = run(capsys, "eval", "add(1,")
        assert code == 2
        assert "position" in err

    def test_bad_env_is_usage(self, capsys):
        assert run(capsys, "eval", "x", "--env", "x=-1")[0] == 2

    def test_budget_exit_code(self, capsys):
        with override(bit_budget=64):
            assert run(capsys, "eval", "pow2(100)")[0] == 3


class TestGenfn:
    """genfn brute / count / extract."""

    def test_brute(self, capsys):
        assert run(capsys, "genfn", "brute", "--predicate", "lt", "--y", "2")[:2] == (0, "4")

    def test_extract(self, capsys):
        assert run(capsys, "genfn", "extract", "--function", "monus", "--args", "5,3")[:2] == (0, "2")

    def test_count(self, capsys):
        assert run(capsys, "genfn", "count", "--predicate", "even", "--poly", "x", "--z", "2")[0] == 0

    def test_malformed_count_bound(self, capsys):
        assert run(capsys, "genfn", "count", "--predicate", "even", "--poly", "x+")[0] == 2

    def test_unknown_predicate(self, capsys):
        assert run(capsys, "genfn", "brute", "--predicate", "prime")[0] == 2

    def test_wrong_arity(self, capsys):
        assert run(capsys, "genfn", "extract", "--function", "monus", "--args", "5")[0] == 2


class TestFom:
    """fom eval / compile / verify."""

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "fom", "verify", MAJORITY, "--word", "1101")
        assert code == 0
        assert out.startswith("ok")

    def test_eval(self, capsys):
        assert run(capsys, "fom", "eval", MAJORITY, "--word", "1001")[:2] == (0, "false")

    def test_compile_json(self, capsys):
        code, out, _ = run(capsys, "fom", "compile", MAJORITY, "--word", "1101", "--json")
        assert code == 0
        assert json.loads(out)["table"] == "1"

    def test_missing_file(self, capsys):
        assert run(capsys, "fom", "eval", "no/such.fom", "--word", "1")[0] == 2

    def test_bad_word(self, capsys):
        assert run(capsys, "fom", "eval", MAJORITY, "--word", "12")[0] == 2

    @pytest.mark.parametrize("action", ["verify", "compile"])
    def test_non_binary_word_is_usage_error(self, capsys, action):
        code, _, err = run(capsys, "fom", action, MAJORITY, "--word", "1102")
        assert code == 2
        assert "0/1" in err

    def test_mismatch_reports_computed_cell(self, capsys, monkeypatch):
        monkeypatch.setattr(fomlogic.HFunctionTable, "truth", lambda self, word, ys: 1)
        code, _, err = run(capsys, "fom", "verify", MAJORITY, "--word", "1001")
        assert code == 1
        assert "expected False, got 1" in err


class TestMinsky:
    """minsky run / compile / verify."""

    def test_run(self, capsys):
        assert run(capsys, "minsky", "run", ADDER, "--input", "2,3")[:2] == (0, "5 (4 steps)")

    def test_verify_box(self, capsys):
        code, out, _ = run(capsys, "minsky", "verify", INC, "--box", "0..10", "--time-poly", "x+2")
        assert code == 0
        assert out == "ok (11 inputs)"

    def test_compile_json(self, capsys):
        code, out, _ = run(capsys, "minsky", "compile", INC, "--input", "3", "--time-poly", "2", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["result"] == "4"
        assert all(isinstance(v, str) for v in payload.values())

    def test_time_bound_too_small(self, capsys):
        code, _, err = run(capsys, "minsky", "compile", ADDER, "--input", "2,3", "--time-poly", "1")
        assert code == 1
        assert "Verification failed" in err

    def test_step_budget(self, capsys):
        assert run(capsys, "minsky", "run", ADDER, "--input", "9,9", "--max-steps", "3")[0] == 3

    def test_verify_needs_box(self, capsys):
        assert run(capsys, "minsky", "verify", INC, "--time-poly", "x+2")[0] == 2

    def test_two_tape_box(self, capsys):
        code, out, _ = run(capsys, "minsky", "verify", ADDER, "--box", "0..2,0..1", "--time-poly", "x+y+2")
        assert (code, out) == (0, "ok (6 inputs)")

    @pytest.mark.parametrize("poly", ["x+", "2**x"])
    def test_bad_time_poly_is_usage_error(self, capsys, poly):
        code, _, err = run(capsys, "minsky", "verify", INC, "--box", "0..3", "--time-poly", poly)
        assert code == 2
        assert "Error:" in err


class TestSuites:
    """perm verify and suite."""

    def test_perm_codes(self, capsys):
        code, out, _ = run(capsys, "perm", "verify", "--suite", "codes", "--prefix", "256")
        assert code == 0
        assert out.startswith("codes: ok")

    def test_perm_rolall_json(self, capsys):
        code, out, _ = run(capsys, "perm", "verify", "--suite", "rolall", "--n", "1", "--json")
        assert code == 0
        assert json.loads(out)[0]["ok"] is True

    def test_suite_heights(self, capsys):
        assert run(capsys, "suite", "heights")[:2] == (0, "heights: ok (3 checks)")

    def test_failed_suite_exit_code(self, capsys, monkeypatch):
        def broken(rng, **_):
            raise VerificationError("always", 17, 1, 2)

        monkeypatch.setitem(suites.SUITES, "heights", broken)
        code, out, _ = run(capsys, "suite", "heights", "--json")
        report = json.loads(out)[0]
        assert code == 1
        assert report["ok"] is False
        assert report["counterexample"] == "17"
