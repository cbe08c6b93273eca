"""
Error hierarchy for the recfun toolkit.

Every failure raised by the library derives from RecfunError so the CLI
can map it onto an exit code without knowing which module raised it.

Exports:
  RecfunError            — base class (exit code 1)
  BudgetError            — a value, iteration or step budget was exceeded (exit 3)
  StepBudgetError        — a machine or Q iteration ran past its step budget
  DomainError            — an argument lies outside an operation's domain
  FormulaSyntaxError     — formula / FOM text failed to parse (carries position)
  UnboundVariableError   — evaluation met a variable with no binding
  HeightClassError       — formula cannot be classified in the requested tower
  MachineFormatError     — machine file failed to parse (carries line number)
  StuckMachineError      — no command matches the current (read-vector, state)
  HypothesisViolation    — Q-property hypotheses fail (carries clause index)
  TimeBoundError         — compiled Q simulation disagrees with the machine
  VerificationError      — a property check found a counterexample
"""


class RecfunError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


# ---------------------------------------------------------------------------
# Budgets: exit code 3
# ---------------------------------------------------------------------------

class BudgetError(RecfunError):
    """A configured size or iteration limit would be exceeded."""

    exit_code = 3

    def __init__(self, what: str, needed: int, limit: int):
        self.what = what
        self.needed = needed
        self.limit = limit
        super().__init__(f"{what}: needs {needed}, budget is {limit}")


class StepBudgetError(BudgetError):
    """A simulation exhausted its step budget before reaching the final state."""


# ---------------------------------------------------------------------------
# Domain and input errors: exit code 2
# ---------------------------------------------------------------------------

class DomainError(RecfunError, ValueError):
    exit_code = 2


class FormulaSyntaxError(RecfunError, ValueError):
    exit_code = 2

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class UnboundVariableError(RecfunError, KeyError):
    exit_code = 2

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class HeightClassError(RecfunError, ValueError):
    exit_code = 2


class MachineFormatError(RecfunError, ValueError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


# ---------------------------------------------------------------------------
# Semantic failures: exit code 1
# ---------------------------------------------------------------------------

class StuckMachineError(RecfunError):
    def __init__(self, read: tuple[int, ...], state: int):
        self.read = read
        self.state = state
        super().__init__(f"no command for read vector {read} in state {state}")


class HypothesisViolation(RecfunError):
    """One of the ten Q-property hypotheses is false; clause is 1-based."""

    def __init__(self, clause: int, description: str):
        self.clause = clause
        self.description = description
        super().__init__(f"hypothesis {clause} violated: {description}")


class TimeBoundError(RecfunError):
    pass


class VerificationError(RecfunError):
    """A property check disagreed with its oracle on a concrete input."""

    def __init__(self, check: str, counterexample, expected=None, actual=None):
        self.check = check
        self.counterexample = counterexample
        self.expected = expected
        self.actual = actual
        detail = f"{check}: counterexample {counterexample!r}"
        if expected is not None or actual is not None:
            detail += f" (expected {expected!r}, got {actual!r})"
        super().__init__(detail)
