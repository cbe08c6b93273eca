"""
Runtime settings for the recfun toolkit.

Values come from config.yaml next to this file, then from the environment
(RECFUN_BIT_BUDGET), then from explicit overrides. Library code reads the
active settings through current(); tests and the CLI swap them with
override() or configure().

Exports:
  Settings                — frozen dataclass of budgets and switches
  load(path) → Settings   — read config.yaml plus environment overrides
  current() → Settings    — active settings (loaded lazily)
  configure(**kw)         — replace active settings, returns the previous ones
  override(**kw)          — context manager form of configure()
  check_bits(what, n)     — raise BudgetError when n exceeds bit_budget
  check_iterations(what, n)
  check_steps(what, n)    — StepBudgetError when n exceeds step_budget

Usage:
    from settings import current, override
    with override(path="oracle"):
        ...
"""

import contextlib
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from errors import BudgetError, DomainError, StepBudgetError

logger = logging.getLogger(__name__)

MODEL_DIR = Path(__file__).parent
CONFIG_PATH = MODEL_DIR / "config.yaml"

_PATHS = frozenset({"auto", "formula", "oracle"})


@dataclass(frozen=True)
class Settings:
    bit_budget: int = 1 << 24
    iteration_budget: int = 1_000_000
    step_budget: int = 1_000_000
    path: str = "auto"
    formula_bit_limit: int = 1 << 20
    fresh_var_pool: int = 256
    prefix: int = 4096
    seed: int = 7

    def __post_init__(self):
        if self.path not in _PATHS:
            raise DomainError(f"combinator path must be one of {sorted(_PATHS)}, got {self.path!r}")
        for name in ("bit_budget", "iteration_budget", "step_budget", "formula_bit_limit", "prefix"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")


def load(path: Path | None = None) -> Settings:
    """Read budgets from config.yaml; RECFUN_BIT_BUDGET wins over the file."""
    config_path = path or CONFIG_PATH
    raw: dict = {}
    if config_path.exists():
        with open(config_path) as f:
            raw = yaml.safe_load(f) or {}

    budgets = raw.get("budgets", {})
    combinators = raw.get("combinators", {})
    verification = raw.get("verification", {})
    values = {
        "bit_budget": budgets.get("bit_budget", Settings.bit_budget),
        "iteration_budget": budgets.get("iteration_budget", Settings.iteration_budget),
        "step_budget": budgets.get("step_budget", Settings.step_budget),
        "path": combinators.get("path", Settings.path),
        "formula_bit_limit": combinators.get("formula_bit_limit", Settings.formula_bit_limit),
        "fresh_var_pool": raw.get("rewrite", {}).get("fresh_var_pool", Settings.fresh_var_pool),
        "prefix": verification.get("prefix", Settings.prefix),
        "seed": verification.get("seed", Settings.seed),
    }

    env_budget = os.environ.get("RECFUN_BIT_BUDGET")
    if env_budget:
        try:
            values["bit_budget"] = int(env_budget)
        except ValueError:
            raise DomainError(f"RECFUN_BIT_BUDGET must be an integer, got {env_budget!r}") from None
        logger.debug("bit budget %d taken from environment", values["bit_budget"])

    return Settings(**values)


_active: Settings | None = None


def current() -> Settings:
    global _active
    if _active is None:
        _active = load()
    return _active


def configure(**overrides) -> Settings:
    """Replace the active settings with overridden fields; returns the old ones."""
    global _active
    previous = current()
    _active = replace(previous, **overrides)
    return previous


@contextlib.contextmanager
def override(**overrides):
    global _active
    previous = configure(**overrides)
    try:
        yield _active
    finally:
        _active = previous


# ---------------------------------------------------------------------------
# Budget guards
# ---------------------------------------------------------------------------

def check_bits(what: str, bits: int) -> None:
    limit = current().bit_budget
    if bits > limit:
        raise BudgetError(what, bits, limit)


def check_iterations(what: str, count: int) -> None:
    limit = current().iteration_budget
    if count > limit:
        raise BudgetError(what, count, limit)


def check_steps(what: str, count: int) -> None:
    limit = current().step_budget
    if count > limit:
        raise StepBudgetError(what, count, limit)
