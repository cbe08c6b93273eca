"""Test Minsky machines, the reduction chain and compilation to Q."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import minskyq
from errors import (
    DomainError, HypothesisViolation, MachineFormatError, StepBudgetError,
    StuckMachineError, TimeBoundError,
)
from minskyq import (
    ConfigCodeParams, Configuration, QParams, ReducedMachine,
    config_code, config_decode, load_machine, parse_machine, run,
)
from natcore import length


@pytest.fixture(scope="module")
def adder(machines_dir):
    return load_machine(machines_dir / "adder.mm")


@pytest.fixture(scope="module")
def inc(machines_dir):
    return load_machine(machines_dir / "inc.mm")


class TestParse:
    """Machine file format."""

    def test_fixture_machines_run(self, test_cases, machines_dir):
        for case in test_cases["machines"]:
            m = load_machine(machines_dir / case["file"])
            assert run(m, case["inputs"]) == (case["result"], case["steps"]), case["file"]

    def test_reduced_file(self, machines_dir):
        assert isinstance(load_machine(machines_dir / "inc_reduced.mm"), ReducedMachine)

    def test_format_reparses(self, adder):
        assert parse_machine(minskyq.format_machine(adder)) == adder

    @pytest.mark.parametrize("text", [
        "1 1 -> R 0",
        "tapes 1\nstates 2\n1 1 -> R 0\n1 1 -> N 0",
        "tapes 1\nstates 2\n1 1 -> L 0",
        "tapes 1\nstates 2\n1 1 R 0",
        "tapes 1\nstates 2\n1 1 -> X 0",
        "tapes 1\nstates 2\n1 -> 1 ; R 0 ; R 0\n1 1 -> R 0",
    ])
    def test_malformed(self, text):
        with pytest.raises(MachineFormatError):
            parse_machine(text)

    def test_error_line_number(self):
        with pytest.raises(MachineFormatError) as exc:
            parse_machine("tapes 1\nstates 2\n# comment\n1 1 -> Q 0")
        assert exc.value.line == 4


class TestRun:
    """Direct simulation."""

    def test_stuck(self):
        m = parse_machine("tapes 1\nstates 2\n1 1 -> N 0")
        with pytest.raises(StuckMachineError):
            run(m, [3])

    def test_step_budget(self):
        m = parse_machine("tapes 1\nstates 2\n1 1 -> N 1\n0 1 -> N 1")
        with pytest.raises(StepBudgetError):
            run(m, [0], max_steps=5)

    def test_too_many_inputs(self, inc):
        with pytest.raises(DomainError):
            run(inc, [1, 2])

    def test_missing_inputs_default_to_zero(self, adder):
        assert run(adder, [4]) == (4, 1)


class TestReduce:
    """One tape read per step."""

    @pytest.mark.parametrize("inputs", [(0, 0), (2, 3), (5, 1)])
    def test_same_result(self, adder, inputs):
        reduced = minskyq.reduce(adder)
        assert run(reduced, inputs)[0] == run(adder, inputs)[0]

    def test_step_ratio_is_tape_count(self, adder):
        assert minskyq.step_ratio(adder, [(2, 3), (4, 0)]) == 2.0

    def test_missing_command_gets_stuck(self):
        m = parse_machine("tapes 1\nstates 2\n1 1 -> N 0")
        reduced = minskyq.reduce(m)
        with pytest.raises(StuckMachineError):
            run(m, [2])
        with pytest.raises(StuckMachineError):
            run(reduced, [2], max_steps=50)
        assert run(reduced, [0]) == run(m, [0])

    def test_stuck_states_survive_format(self):
        reduced = minskyq.reduce(parse_machine("tapes 1\nstates 2\n1 1 -> N 0"))
        assert reduced.stuck
        assert parse_machine(minskyq.format_machine(reduced)) == reduced


class TestDecompose:
    """Simple vector functions and their simplistic codes."""

    def _trace(self, machine, inputs):
        c = minskyq.initial(machine, inputs)
        while c.state:
            yield c
            c = minskyq.step(machine, c)

    def test_composition_is_one_step(self, adder):
        reduced = minskyq.reduce(adder)
        fs = minskyq.decompose(reduced)
        for c in self._trace(reduced, (2, 3)):
            out = c
            for f in reversed(fs):
                out = f(out)
            assert out == minskyq.step(reduced, c)

    def test_simplistic_triples(self, adder):
        reduced = minskyq.reduce(adder)
        states = minskyq.state_space(reduced)
        p = ConfigCodeParams(length(states - 1), 4)
        for c in self._trace(reduced, (2, 3)):
            cur = c
            for f in reversed(minskyq.decompose(reduced)):
                x = config_code(cur, p)
                for g in minskyq.simple_to_simplistic(f, p, states):
                    x = g(x)
                cur = f(cur)
                assert config_decode(x, reduced.tapes, p) == cur

    def test_config_code(self):
        p = ConfigCodeParams(2, 3)
        c = Configuration((5, 1), 3)
        assert config_code(c, p) == 5 + (1 << 3) + (3 << 6)
        assert config_decode(config_code(c, p) + (1 << 8), 2, p) == c

    def test_state_does_not_fit(self):
        with pytest.raises(DomainError):
            config_code(Configuration((0,), 4), ConfigCodeParams(2, 3))


class TestQ:
    """The function Q, its hypotheses and the compiler."""

    def test_fixture_values(self, test_cases):
        for case in test_cases["q_eval"]:
            params = QParams(*(case[k] for k in ("x", "p1", "p2", "c1", "c2", "t")))
            assert minskyq.q_eval(params) == case["value"], case["_note"]

    def test_property(self):
        params, u, v = minskyq.q_params_for([1, 2], [2, 1], 4, 5)
        assert minskyq.q_prop_check(u, v, params)

    def test_zero_start_violates_first_hypothesis(self):
        params, u, v = minskyq.q_params_for([1, 2], [2, 1], 0, 5)
        with pytest.raises(HypothesisViolation) as exc:
            minskyq.q_prop_check(u, v, params)
        assert exc.value.clause == 1

    def test_zero_time_violates_seventh_hypothesis(self):
        params, u, v = minskyq.q_params_for([1], [1], 3, 0)
        with pytest.raises(HypothesisViolation) as exc:
            minskyq.q_prop_check(u, v, params)
        assert exc.value.clause == 7

    def test_params_json_is_decimal(self):
        params, _, _ = minskyq.q_params_for([1], [1], 3, 2)
        assert all(isinstance(v, str) and v.isdigit() for v in params.to_json().values())

    def test_compile_inc(self, inc):
        params, extract = minskyq.compile(inc, [3], lambda y: 2)
        assert extract(minskyq.q_eval(params)) == 4

    @pytest.mark.parametrize("inputs", [(0, 0), (2, 3), (4, 1)])
    def test_compile_adder(self, adder, inputs):
        params, extract = minskyq.compile(adder, inputs, lambda x, y: x + y + 2)
        assert extract(minskyq.q_eval(params)) == sum(inputs)

    def test_bound_too_small(self, adder):
        with pytest.raises(TimeBoundError):
            minskyq.compile(adder, (2, 3), lambda x, y: 1)
