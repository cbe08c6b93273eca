"""Test generating functions: constructions against cell-by-cell brute force."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import genfn
from errors import DomainError
from genfn import (
    AddDummy, GenPredicate, GrowthBound, IdentifyLast, Permute, Polynomial, SubstConst,
)

LESS = GenPredicate(2, lambda x, y: x < y, "lt")
EVEN = GenPredicate(1, lambda x: x % 2 == 0, "even")
SUM_EQ = GenPredicate(3, lambda x, y, z: x + y == z, "sum_eq")


class TestPolynomial:
    """Polynomials with natural coefficients."""

    def test_parse_and_call(self):
        p = Polynomial.parse("x*y + 3*x + 1")
        assert p.arity == 2
        assert p(2, 5) == 17

    def test_indexed_variables(self):
        p = Polynomial.parse("x1 + x3")
        assert p.arity == 3
        assert p(1, 100, 2) == 3

    def test_negative_coefficient(self):
        with pytest.raises(DomainError):
            Polynomial.parse("x - 1")

    @pytest.mark.parametrize("text", ["x+", "2**x", "x**-1", "1/x"])
    def test_not_a_polynomial(self, text):
        with pytest.raises(DomainError):
            Polynomial.parse(text)

    def test_lift(self):
        p = Polynomial.parse("x + 2*y").lift(3, [2, 0])
        assert p(5, 7, 1) == 1 + 10

    def test_growth_bound(self):
        assert GrowthBound(2, Polynomial.parse("x + 1")).evaluate(1) == 16


class TestBruteForce:
    """Truth tables packed into one integer."""

    def test_less_than(self):
        # cells (0,0) (1,0) (0,1) (1,1): only x=0 < y=1
        assert genfn.genfn_bruteforce(LESS, 2) == 0b0100

    def test_non_boolean_predicate(self):
        with pytest.raises(DomainError):
            genfn.genfn_bruteforce(GenPredicate(1, lambda x: 2), 3)


class TestLogic:
    """Negation and conjunction of generating functions."""

    @pytest.mark.parametrize("y", [1, 2, 4])
    def test_not_and(self, y):
        a = genfn.genfn_bruteforce(LESS, y)
        b = genfn.genfn_bruteforce(GenPredicate(2, lambda x, z: (x + z) % 2 == 0), y)
        neg = GenPredicate(2, lambda x, z: not x < z)
        both = GenPredicate(2, lambda x, z: x < z and (x + z) % 2 == 0)
        assert genfn.gen_logic(a, 0, y, 2, "not") == genfn.genfn_bruteforce(neg, y)
        assert genfn.gen_logic(a, b, y, 2, "and") == genfn.genfn_bruteforce(both, y)

    def test_unknown_op(self):
        with pytest.raises(DomainError):
            genfn.gen_logic(1, 1, 2, 1, "or")


class TestPolyCmp:
    """Comparison of two polynomials over the grid."""

    @pytest.mark.parametrize("p,q", [("x*y", "x + y"), ("2*x", "y + 1"), ("x**2", "3*y")])
    def test_matches_brute_force(self, p, q):
        pp, qq = Polynomial.parse(p, 2), Polynomial.parse(q, 2)
        for y in (1, 3, 4):
            expected = genfn.genfn_bruteforce(genfn.poly_cmp_predicate(pp, qq), y)
            assert genfn.gen_poly_cmp(pp, qq, y) == expected, (p, q, y)

    def test_arity_mismatch(self):
        with pytest.raises(DomainError):
            genfn.gen_poly_cmp(Polynomial.parse("x"), Polynomial.parse("x + y"), 2)


class TestExplicit:
    """Explicit transformations agree with the transformed predicate."""

    @pytest.mark.parametrize("psi,transform", [
        (LESS, Permute((1, 0))),
        (SUM_EQ, Permute((2, 0, 1))),
        (LESS, SubstConst(2)),
        (SUM_EQ, SubstConst(1)),
        (SUM_EQ, IdentifyLast()),
        (LESS, IdentifyLast()),
        (EVEN, AddDummy()),
        (LESS, AddDummy()),
    ])
    def test_transform(self, psi, transform):
        y = 3
        f = genfn.genfn_bruteforce(psi, y)
        expected = genfn.genfn_bruteforce(genfn.transformed_predicate(psi, transform), y)
        assert genfn.gen_explicit(f, transform, y, psi.arity) == expected

    def test_bad_permutation(self):
        with pytest.raises(DomainError):
            genfn.gen_explicit(0, Permute((0, 0)), 2, 2)

    def test_constant_outside_grid(self):
        with pytest.raises(DomainError):
            genfn.gen_explicit(0, SubstConst(5), 2, 2)


class TestCount:
    """Counting below a polynomial bound."""

    @pytest.mark.parametrize("z", [1, 2, 3])
    def test_count_even_below_x(self, z):
        poly = Polynomial.parse("x", 1)
        expected = genfn.genfn_bruteforce(genfn.count_predicate(EVEN, poly), z)
        assert genfn.gen_count(EVEN, poly, z) == expected

    @pytest.mark.parametrize("psi,bound,z", [
        (LESS, "x + 1", 4),
        (LESS, "x*y", 3),
        (SUM_EQ, "x1", 2),
        (SUM_EQ, "x2 + 1", 2),
    ])
    def test_count_several_arguments(self, psi, bound, z):
        poly = Polynomial.parse(bound, psi.arity)
        expected = genfn.genfn_bruteforce(genfn.count_predicate(psi, poly), z)
        assert genfn.gen_count(psi, poly, z) == expected

    def test_arity_mismatch(self):
        with pytest.raises(DomainError):
            genfn.gen_count(LESS, Polynomial.parse("x", 1), 2)


class TestExtract:
    """Recovering a function from the generating function of its bit graph."""

    @pytest.mark.parametrize("args", [(0, 0), (1, 2), (3, 3), (5, 0)])
    def test_sum(self, args):
        psi = genfn.bit_graph(lambda a, b: a + b, 2, "sum")
        bound = Polynomial.parse("x + y + 1")
        value = genfn.xs_extract(lambda z: genfn.genfn_bruteforce(psi, z), bound, args)
        assert value == sum(args)

    def test_zero_bound(self):
        assert genfn.xs_extract(lambda z: 0, Polynomial.constant(0, 1), (4,)) == 0
