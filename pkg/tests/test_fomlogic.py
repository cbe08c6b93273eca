"""Test FO[M] parsing, model checking, word codes, the alt rewrite and the compiler."""

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import fomlogic
from errors import DomainError, FormulaSyntaxError
from fomlogic import (
    Exists, Leq, Majority, One, Var, WordBit, WordLen, WordModel,
    code, code_alt, code_value, code_var, compile_fom, eval_formula, ext,
    ffom_assemble, lcode, parse_fom, to_sexpr,
)


def _words(max_len):
    for n in range(1, max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


class TestSyntax:
    """S-expression reader."""

    def test_parse_majority(self):
        assert parse_fom("(M y1 (wbit y1))") == Majority(1, WordBit(Var(1)))

    def test_terms(self):
        assert parse_fom("(leq 1 len)") == Leq(One(), WordLen())

    def test_nary_and_comment(self):
        phi = parse_fom("(and (wbit 1) (wbit len) (leq 1 len)) ; three parts")
        assert to_sexpr(parse_fom(to_sexpr(phi))) == to_sexpr(phi)

    @pytest.mark.parametrize("text", ["(leq y1)", "(wbit y0)", "(E 1 (wbit 1))", "(foo 1)", "(wbit 1"])
    def test_malformed(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_fom(text)

    def test_free_vars(self):
        phi = parse_fom("(E y2 (and (leq y1 y2) (wbit y3)))")
        assert fomlogic.free_vars(phi) == {1, 3}


class TestModelChecking:
    """Direct evaluation over words."""

    def test_majority(self):
        phi = parse_fom("(M y1 (wbit y1))")
        assert eval_formula(phi, WordModel("110"))
        assert not eval_formula(phi, WordModel("100"))
        assert not eval_formula(phi, WordModel("10"))

    def test_bit_of_length(self):
        phi = parse_fom("(bit len y1)")
        # |X| = 5 = 101
        assert [eval_formula(phi, WordModel("00000", {1: p})) for p in (1, 2, 3)] == [True, False, True]

    def test_empty_word_rejected(self):
        with pytest.raises(DomainError):
            WordModel("")

    def test_assignment_outside_word(self):
        with pytest.raises(DomainError):
            WordModel("01", {1: 3})


class TestCodes:
    """Word encodings of number tuples."""

    def test_fixture_codes(self, test_cases):
        for case in test_cases["codes"]:
            assert code(case["xs"]) == case["code"]

    def test_empty_tuple(self):
        assert code([]) == "01"

    def test_ext(self):
        assert ext("1", 3) == "100"
        with pytest.raises(DomainError):
            ext("101", 2)

    @pytest.mark.parametrize("xs,k", [([0], 1), ([2], 1), ([5, 0], 1), ([3], 2), ([1, 6, 2], 1)])
    def test_lcode_and_value(self, xs, k):
        word = code_var(xs, k)
        assert lcode(xs, k) == len(word)
        assert code_value(xs, k) == int(word, 2)

    def test_code_alt_interleaves(self):
        word = code_alt([0], 1, 0b101)
        assert word[0::2] == "0101"
        assert word[1::2] == "1010"


class TestAltRewrite:
    """Truth on the interleaved word equals truth of the rewrite on the plain code."""

    @pytest.mark.parametrize("text,m", [("(wbit y1)", 1), ("(E y1 (and (wbit y1) (wbit len)))", 1)])
    def test_rewrite(self, text, m):
        phi = parse_fom(text)
        rewritten = fomlogic.rewrite_alt_to_var(phi, m)
        free = sorted(fomlogic.free_vars(phi))
        plain = code_var([0], 1)
        for y in (1, 5, len(plain)):
            alt = code_alt([0], 1, y)
            for ys in itertools.product(range(1, len(plain) + 1), repeat=len(free)):
                env = dict(zip(free, ys))
                want = eval_formula(phi, WordModel(alt, env))
                got = eval_formula(rewritten, WordModel(plain, {**env, m + 1: y}))
                assert got == want, (text, y, ys)

    def test_free_variable_outside_range(self):
        with pytest.raises(DomainError):
            fomlogic.rewrite_alt_to_var(parse_fom("(wbit y2)"), 1)


class TestCompile:
    """Compiled tables agree with model checking."""

    @pytest.mark.parametrize("text,m", [
        ("(leq y1 y2)", 2),
        ("(bit y2 y1)", 2),
        ("(wbit len)", 0),
        ("(or (wbit 1) (leq len y1))", 1),
        ("(A y1 (wbit y1))", 0),
        ("(M y1 (wbit y1))", 0),
        ("(M y2 (and (leq y2 y1) (wbit y2)))", 1),
    ])
    def test_agrees_with_eval(self, text, m):
        phi = parse_fom(text)
        table = compile_fom(phi, m)
        for word in _words(4):
            for ys in itertools.product(range(1, len(word) + 1), repeat=m):
                model = WordModel(word, {i + 1: y for i, y in enumerate(ys)})
                assert table.truth(word, ys) == eval_formula(phi, model), (text, word, ys)

    def test_free_variable_outside_table(self):
        with pytest.raises(DomainError):
            compile_fom(parse_fom("(wbit y3)"), 2)

    @pytest.mark.parametrize("word", ["", "1102", "ab"])
    def test_table_rejects_non_binary_word(self, word):
        table = compile_fom(parse_fom("(wbit len)"), 0)
        with pytest.raises(DomainError):
            table.table_for(word)

    def test_quantified_variable_may_exceed_m(self):
        table = compile_fom(Exists(5, WordBit(Var(5))), 0)
        assert table.truth("0010", ())
        assert not table.truth("0000", ())


class TestAssemble:
    """Functions rebuilt from bit-graph tables."""

    def test_input_bits(self):
        f = ffom_assemble(compile_fom(fomlogic.target_input_bits([0, 2]), 1), 1)
        assert [f(x) for x in range(6)] == [x & 5 for x in range(6)]

    def test_length(self):
        f = ffom_assemble(compile_fom(fomlogic.target_length(), 1), 1)
        assert [f(x) for x in range(6)] == [x.bit_length() for x in range(6)]

    def test_zero(self):
        f = ffom_assemble(compile_fom(fomlogic.target_zero(), 1), 1)
        assert f(3) == 0
