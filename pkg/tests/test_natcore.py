"""Test the basis-function catalog: totality conventions, budgets, bounded operators."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest
from hypothesis import given, strategies as st

import natcore
from errors import BudgetError, DomainError
from settings import override

nats = st.integers(min_value=0, max_value=10**6)


class TestArithmetic:
    """Truncated and zero-safe arithmetic."""

    @given(nats, nats)
    def test_monus_is_truncated_difference(self, x, y):
        assert natcore.monus(x, y) == max(x - y, 0)

    @given(nats)
    def test_division_by_zero_is_zero(self, x):
        assert natcore.div_floor(x, 0) == 0
        assert natcore.rm(x, 0) == 0

    @given(nats, st.integers(min_value=1, max_value=10**6))
    def test_div_and_rm_reassemble(self, x, y):
        assert natcore.div_floor(x, y) * y + natcore.rm(x, y) == x

    def test_sg_and_sgbar(self):
        assert [natcore.sg(v) for v in (0, 1, 7)] == [0, 1, 1]
        assert [natcore.sgbar(v) for v in (0, 1, 7)] == [1, 0, 0]

    def test_negative_arguments_rejected(self):
        with pytest.raises(DomainError):
            natcore.monus(-1, 2)
        with pytest.raises(DomainError):
            natcore.add(True, 1)


class TestBits:
    """Bit access, lengths, rotations."""

    def test_log2_floor(self):
        assert natcore.log2_floor(0) == 0
        assert natcore.log2_floor(1) == 0
        assert natcore.log2_floor(1023) == 9
        assert natcore.log2_floor(1024) == 10

    @given(nats, st.integers(min_value=0, max_value=40))
    def test_bit_get_matches_shift(self, x, y):
        assert natcore.bit_get(x, y) == (x >> y) & 1

    def test_length_of_zero(self):
        assert natcore.length(0) == 0
        assert natcore.length(5) == 3

    def test_rot_r(self):
        assert natcore.rot_r(6, 1) == 3
        assert natcore.rot_r(0b1011, 4) == 0b1011
        assert natcore.rot_r(1, 9) == 1

    @given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=0, max_value=64))
    def test_rot_r_keeps_popcount(self, x, y):
        r = natcore.rot_r(x, y)
        assert bin(r).count("1") == bin(x).count("1"), f"rot_r({x}, {y}) = {r}"


class TestExponentials:
    """Exponential basis functions and their budget guard."""

    def test_pow2(self):
        assert natcore.pow2(10) == 1024

    def test_pow2_respects_budget(self):
        with override(bit_budget=64):
            with pytest.raises(BudgetError):
                natcore.pow2(100)

    def test_min_pow2(self):
        assert natcore.min_pow2(5, 10) == 5
        assert natcore.min_pow2(5000, 3) == 8

    def test_exp_logsq(self):
        assert natcore.exp_logsq(0) == 1
        assert natcore.exp_logsq(8) == 2 ** 9

    def test_pow_log(self):
        assert natcore.pow_log(3, 8) == 27
        assert natcore.pow_log(3, 1) == 1

    @given(st.integers(min_value=1, max_value=5000), st.integers(min_value=1, max_value=5000))
    def test_mul_by_powers(self, x, y):
        assert natcore.mul_by_powers(x, y) == x * y


class TestBoundedOperators:
    """Bounded sum, count, minimization, recursion."""

    def test_bounded_sum(self):
        assert natcore.bounded_sum(lambda y: y, 5) == 10
        assert natcore.bounded_sum(lambda y: y, 0) == 0

    def test_bounded_count(self):
        assert natcore.bounded_count(lambda y, a: y % a == 0, 10, 3) == 4

    def test_bounded_mu(self):
        assert natcore.bounded_mu(lambda y: y * y > 10, 10) == 4
        assert natcore.bounded_mu(lambda y: False, 10) == 0

    def test_bounded_recursion_factorial(self):
        fact = natcore.bounded_recursion(
            lambda: 1, lambda t, v: v * (t + 1), lambda t: 10**9, (), 5)
        assert fact == 120

    def test_bounded_recursion_bound_violation(self):
        with pytest.raises(DomainError):
            natcore.bounded_recursion(lambda: 1, lambda t, v: 2 * v, lambda t: 4, (), 5)

    def test_iteration_budget(self):
        with override(iteration_budget=10):
            with pytest.raises(BudgetError):
                natcore.bounded_sum(lambda y: y, 11)


class TestGrzegorczyk:
    """Generating functions of the hierarchy."""

    def test_low_levels(self):
        assert natcore.grzegorczyk(0, 3, 4) == 5
        assert natcore.grzegorczyk(1, 3, 4) == 7
        assert natcore.grzegorczyk(2, 3, 4) == 20

    def test_level_three_at_zero(self):
        assert natcore.grzegorczyk(3, 0, 2) == 16

    def test_level_three_grows_with_x(self):
        assert natcore.grzegorczyk(3, 1, 1) > natcore.grzegorczyk(3, 0, 1)
