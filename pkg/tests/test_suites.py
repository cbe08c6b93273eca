"""Run every property suite at reduced size and check the report plumbing."""

import inspect
import itertools
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import blockvec
import permgroup as pg
import suites
from errors import BudgetError
from settings import override

SMALL = {
    "binomial": {"max_x": 12},
    "heights": {},
    "blockvec": {"count": 25},
    "ssqrt": {"max_x": 40},
    "genfn": {"max_y": 3},
    "xs": {"max_arg": 3},
    "fom": {"max_word": 3},
    "ffom": {"max_x": 3},
    "minsky": {"max_input": 2},
    "qprop": {"count": 30},
    "codes": {"prefix": 256},
    "delete": {"prefix": 256},
    "rolall": {"n": 1},
    "pipeline": {"prefix": 64},
    "reassembly": {"support": 4, "prefix": 64},
}


def test_every_suite_has_a_small_configuration():
    assert set(SMALL) == set(suites.SUITES)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_suite_passes(name):
    report = suites.run_suite(name, 7, **SMALL[name])
    assert report.ok, report.failure
    assert report.checks > 0


def test_perm_suites_are_registered():
    assert set(suites.PERM_SUITES) <= set(suites.SUITES)


def test_seed_is_deterministic():
    a = suites.run_suite("qprop", 3, count=10)
    b = suites.run_suite("qprop", 3, count=10)
    assert a.to_json() == b.to_json()


def test_budget_errors_propagate():
    with override(bit_budget=16):
        with pytest.raises(BudgetError):
            suites.run_suite("ssqrt", 7, max_x=20)


def test_report_json():
    report = suites.SuiteReport("x", 5)
    assert report.to_json() == {"suite": "x", "ok": True, "checks": "5"}
    failed = suites.SuiteReport("x", 0, "boom", "(1, 2)")
    assert failed.line() == "x: FAILED boom"
    assert failed.to_json()["counterexample"] == "(1, 2)"


def test_reassembly_of_a_transposition():
    assert suites.reassembly_demo(pg.from_mapping({0: 1, 1: 0}), points=64) == 64 * (2 * 8 + 4)


def test_reassembly_defaults_to_the_configured_prefix():
    with override(prefix=128):
        assert suites.reassembly_demo(pg.identity) == 128 * (2 * 8 + 4)


def test_default_scales():
    defaults = {
        name: {k: p.default for k, p in inspect.signature(fn).parameters.items()
               if p.kind is p.KEYWORD_ONLY}
        for name, fn in suites.SUITES.items()
    }
    assert defaults["blockvec"]["count"] >= 10_000
    assert defaults["fom"]["max_word"] >= 6
    assert defaults["qprop"]["count"] >= 1000
    assert defaults["genfn"]["max_y"] >= 4
    assert suites.MACHINE_BOXES["adder.mm"][1] == (10, 10)


def test_swap_instances_reach_three_dimensions():
    rng = random.Random(11)
    instances = [suites._swap_instance(rng) for _ in range(60)]
    assert {len(k) for _, k, _, _ in instances} == {1, 2, 3}
    for q, k, m, x in instances:
        assert blockvec.swap_n(x, q, k, m) == blockvec.swap_oracle(x, q, k, m)
        assert len({sum(mi * i for mi, i in zip(m, idx))
                    for idx in itertools.product(range(q), repeat=len(k))}) == q ** len(k)


def test_count_corpus_covers_several_arities():
    arities = {suites.GEN_CORPUS[name].arity for name in suites.COUNT_BOUNDS}
    assert arities == {1, 2, 3}
