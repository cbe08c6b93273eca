"""
Formula ASTs over the basis-function catalog.

Formulas use named application only: `NAME(arg, ...)`, bare variable
names and decimal constants. The evaluator delegates every symbol to
natcore; exp_height classifies a formula by the nesting depth of its
exponentials in one of two towers.

Exports:
  Variable, Constant, Apply   — frozen AST nodes
  HeightClass                 — (tower, height) pair
  BASIS                       — symbol → (arity, natcore function)
  parse(text) → Formula
  to_text(f) → str            — inverse of parse
  evaluate(f, env) → int
  exp_height(f, tower) → HeightClass
  free_variables(f) → set[str]
  rename(f, mapping) → Formula
  binomial_formula() → Formula  — C(x, y) in closed form

Usage:
    f = parse("monus(pow2(add(x, 1)), y)")
    evaluate(f, {"x": 3, "y": 5})        # 11
    exp_height(f, "exp2").height         # 2
"""

import re
from dataclasses import dataclass

import natcore
from errors import DomainError, FormulaSyntaxError, HeightClassError, UnboundVariableError
from settings import check_bits


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Constant:
    value: int

    def __post_init__(self):
        natcore.require_nat(self.value)


@dataclass(frozen=True)
class Apply:
    symbol: str
    args: tuple

    def __post_init__(self):
        if self.symbol not in BASIS:
            raise DomainError(f"unknown basis symbol {self.symbol!r}")
        arity = BASIS[self.symbol][0]
        if len(self.args) != arity:
            raise DomainError(f"{self.symbol} takes {arity} argument(s), got {len(self.args)}")


Formula = Variable | Constant | Apply


@dataclass(frozen=True)
class HeightClass:
    tower: str
    height: int


def _powvar(x: int, y: int) -> int:
    if y and x > 1:
        check_bits("powvar", y * x.bit_length())
    return x ** y


BASIS: dict[str, tuple[int, object]] = {
    "succ":      (1, natcore.succ),
    "add":       (2, natcore.add),
    "mul":       (2, natcore.mul),
    "monus":     (2, natcore.monus),
    "band":      (2, natcore.band),
    "div":       (2, natcore.div_floor),
    "rm":        (2, natcore.rm),
    "pow2":      (1, natcore.pow2),
    "powvar":    (2, _powvar),
    "min_pow2":  (2, natcore.min_pow2),
    "log2":      (1, natcore.log2_floor),
    "len":       (1, natcore.length),
    "rot":       (2, natcore.rot_r),
    "exp_logsq": (1, natcore.exp_logsq),
    "pow_log":   (2, natcore.pow_log),
    "sg":        (1, natcore.sg),
    "sgbar":     (1, natcore.sgbar),
    "bit":       (2, natcore.bit_get),
}

TOWERS = ("exp2", "powxy")


# ---------------------------------------------------------------------------
# Parser: recursive descent over NAME / NUMBER / ( ) ,
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[a-z][a-z0-9_]*)|(?P<number>\d+)|(?P<punct>[(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError("unexpected character", text, offset)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _error(self, message: str):
        tok = self._peek()
        raise FormulaSyntaxError(message, self.text, tok[2] if tok else len(self.text))

    def _expect(self, value: str):
        tok = self._peek()
        if tok is None or tok[1] != value:
            self._error(f"expected {value!r}")
        self.i += 1

    def formula(self) -> Formula:
        tok = self._peek()
        if tok is None:
            self._error("unexpected end of input")
        kind, value, _ = tok
        if kind == "number":
            self.i += 1
            return Constant(int(value))
        if kind != "name":
            self._error(f"unexpected {value!r}")
        self.i += 1
        nxt = self._peek()
        if nxt is not None and nxt[1] == "(":
            if value not in BASIS:
                self._error(f"unknown function {value!r}")
            self.i += 1
            args = [self.formula()]
            while self._peek() is not None and self._peek()[1] == ",":
                self.i += 1
                args.append(self.formula())
            self._expect(")")
            arity = BASIS[value][0]
            if len(args) != arity:
                raise FormulaSyntaxError(
                    f"{value} takes {arity} argument(s), got {len(args)}", self.text, tok[2])
            return Apply(value, tuple(args))
        if value in BASIS:
            raise FormulaSyntaxError(f"basis symbol {value!r} used without arguments", self.text, tok[2])
        return Variable(value)

    def parse(self) -> Formula:
        f = self.formula()
        if self._peek() is not None:
            self._error("trailing input")
        return f


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def to_text(f: Formula) -> str:
    if isinstance(f, Variable):
        return f.name
    if isinstance(f, Constant):
        return str(f.value)
    return f"{f.symbol}({', '.join(to_text(a) for a in f.args)})"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(f: Formula, env: dict[str, int] | None = None) -> int:
    env = env or {}
    if isinstance(f, Constant):
        return f.value
    if isinstance(f, Variable):
        if f.name not in env:
            raise UnboundVariableError(f.name)
        value = env[f.name]
        natcore.require_nat(value)
        return value
    fn = BASIS[f.symbol][1]
    return fn(*(evaluate(a, env) for a in f.args))


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Variable):
        return {f.name}
    if isinstance(f, Constant):
        return set()
    out: set[str] = set()
    for a in f.args:
        out |= free_variables(a)
    return out


def rename(f: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(f, Variable):
        return Variable(mapping.get(f.name, f.name))
    if isinstance(f, Constant):
        return f
    return Apply(f.symbol, tuple(rename(a, mapping) for a in f.args))


# ---------------------------------------------------------------------------
# Exponent height
# ---------------------------------------------------------------------------

def _height(f: Formula, tower: str) -> int:
    if isinstance(f, (Variable, Constant)):
        return 1
    heights = [_height(a, tower) for a in f.args]
    if f.symbol == "pow2":
        return heights[0] + 1
    if f.symbol == "powvar":
        if tower == "exp2":
            raise HeightClassError("powvar cannot be classified in the exp2 tower")
        return max(heights[0], heights[1] + 1)
    return max(heights)


def exp_height(f: Formula, tower: str = "exp2") -> HeightClass:
    """Height of f in the 2^x tower (exp2) or the x^y tower (powxy)."""
    if tower not in TOWERS:
        raise DomainError(f"tower must be one of {TOWERS}, got {tower!r}")
    return HeightClass(tower, _height(f, tower))


# ---------------------------------------------------------------------------
# Binomial coefficient
# ---------------------------------------------------------------------------

def binomial_formula() -> Formula:
    """C(x,y) = ⌊P/2^{(x+1)y}⌋ ∸ ⌊P/2^{(x+1)(y+1)}⌋·2^{x+1}, P = (2^{x+1}+1)^x."""
    x, y = Variable("x"), Variable("y")
    x1 = Apply("succ", (x,))
    base = Apply("pow2", (x1,))
    p = Apply("powvar", (Apply("add", (base, Constant(1))), x))
    upper = Apply("div", (p, Apply("pow2", (Apply("mul", (x1, y)),))))
    lower = Apply("div", (p, Apply("pow2", (Apply("mul", (x1, Apply("succ", (y,)))),))))
    return Apply("monus", (upper, Apply("mul", (lower, base))))
