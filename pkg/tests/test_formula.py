"""Test formula parsing, evaluation, exponent height and the binomial formula."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest
from hypothesis import given, strategies as st

from errors import DomainError, FormulaSyntaxError, HeightClassError, UnboundVariableError
from formula import (
    Apply, Constant, Variable, binomial_formula, evaluate, exp_height,
    free_variables, parse, rename, to_text,
)


class TestParse:
    """Parsing named applications."""

    def test_nested(self):
        f = parse("monus(pow2(add(x, 1)), y)")
        assert f == Apply("monus", (Apply("pow2", (Apply("add", (Variable("x"), Constant(1))),)), Variable("y")))

    def test_to_text_reparses(self):
        text = "add(mul(x, pow2(y)), 1)"
        assert to_text(parse(text)) == text

    @pytest.mark.parametrize("text", ["add(x)", "add(x, 1", "foo(x)", "x y", "pow2", "add(x, $)", ""])
    def test_malformed(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse(text)

    def test_error_position(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse("add(x, $)")
        assert exc.value.position == 7

    def test_apply_checks_arity(self):
        with pytest.raises(DomainError):
            Apply("add", (Variable("x"),))


class TestEvaluate:
    """Evaluation against the fixture table."""

    def test_cases(self, test_cases):
        for case in test_cases["formulas"]:
            got = evaluate(parse(case["text"]), case["env"])
            assert got == case["value"], f"{case['text']}: {case['_note']}"

    def test_unbound(self):
        with pytest.raises(UnboundVariableError):
            evaluate(parse("add(x, y)"), {"x": 1})

    def test_negative_binding(self):
        with pytest.raises(DomainError):
            evaluate(parse("succ(x)"), {"x": -1})

    def test_free_variables_and_rename(self):
        f = parse("add(x, mul(y, x))")
        assert free_variables(f) == {"x", "y"}
        g = rename(f, {"x": "z"})
        assert free_variables(g) == {"y", "z"}
        assert evaluate(g, {"z": 2, "y": 3}) == 8


class TestHeight:
    """Exponent height in both towers."""

    def test_cases(self, test_cases):
        for case in test_cases["heights"]:
            h = exp_height(parse(case["text"]), case["tower"])
            assert h.height == case["height"], case["text"]

    def test_powvar_needs_powxy(self):
        f = parse("powvar(x, y)")
        with pytest.raises(HeightClassError):
            exp_height(f, "exp2")
        assert exp_height(f, "powxy").height == 2

    def test_unknown_tower(self):
        with pytest.raises(DomainError):
            exp_height(parse("x"), "tetration")


class TestBinomial:
    """C(x, y) from a single closed formula."""

    def test_known_value(self):
        assert evaluate(binomial_formula(), {"x": 4, "y": 2}) == 6

    @given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=14))
    def test_matches_comb(self, x, y):
        assert evaluate(binomial_formula(), {"x": x, "y": y}) == math.comb(x, y)

    def test_height_in_powxy(self):
        assert exp_height(binomial_formula(), "powxy").height == 2
