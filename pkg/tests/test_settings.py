"""Test configuration loading and overrides."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

import settings
from errors import BudgetError, DomainError, StepBudgetError


def test_config_yaml_values(monkeypatch):
    """config.yaml ships the 2^24-bit budget and the auto path."""
    monkeypatch.delenv("RECFUN_BIT_BUDGET", raising=False)
    s = settings.load()
    assert s.bit_budget == 1 << 24
    assert s.path == "auto"
    assert s.prefix == 4096
    assert s.seed == 7


def test_env_budget_override(monkeypatch):
    monkeypatch.setenv("RECFUN_BIT_BUDGET", "1234")
    assert settings.load().bit_budget == 1234


def test_bad_env_budget(monkeypatch):
    monkeypatch.setenv("RECFUN_BIT_BUDGET", "lots")
    with pytest.raises(DomainError):
        settings.load()


def test_missing_config_uses_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv("RECFUN_BIT_BUDGET", raising=False)
    s = settings.load(tmp_path / "absent.yaml")
    assert s == settings.Settings()


def test_override_restores():
    before = settings.current()
    with settings.override(bit_budget=10) as active:
        assert active.bit_budget == 10
        assert settings.current().bit_budget == 10
    assert settings.current() == before


def test_bad_path_rejected():
    with pytest.raises(DomainError):
        settings.Settings(path="fast")


def test_guards():
    with settings.override(bit_budget=8, iteration_budget=3, step_budget=2):
        settings.check_bits("x", 8)
        with pytest.raises(BudgetError):
            settings.check_bits("x", 9)
        with pytest.raises(BudgetError):
            settings.check_iterations("x", 4)
        with pytest.raises(StepBudgetError):
            settings.check_steps("x", 3)
