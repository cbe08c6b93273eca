"""
FO[M] over binary words: syntax, model checking, word encodings, the
alt-to-var rewrite and the compiler from formulas to h-function tables.

A model is a non-empty 0/1 word X with variables y₁, y₂, … ranging over
positions 1..|X|. Terms are 1, |X| (written `len`) and variables.
Atoms:
  (leq t1 t2)   h(t1) ≤ h(t2)
  (bit t1 t2)   bit h(t2)−1 of h(t1) is 1
  (wbit t)      symbol number h(t) of X, counted from one at the left, is 1
Connectives and, or, not; quantifiers E, A and M (majority: more than
|X|/2 witnesses).

A compiled formula is an h-function table: for a word X of length l,
f(c(X), 2^l) holds one l-bit cell per assignment (y₁,…,y_m), cell index
(y₁−1) + (y₂−1)l + … + (y_m−1)l^{m−1}, containing the truth value.

Exports:
  One, WordLen, Var                       — terms
  Leq, Bit, WordBit, And, Or, Not,
  Exists, Forall, Majority                — formulas
  WordModel, HFunctionTable, check_word
  parse_fom(text) / to_sexpr(phi) / free_vars(phi)
  eval_term(t, model) / eval_formula(phi, model)
  code(xs) / ext(alpha, n) / code_var(xs, k) / code_alt(xs, k, y)
  lcode(xs, k) / code_value(xs, k)
  lt, gt, eq, implies, iff, succ_of, double_of — derived formula builders
  rewrite_alt_to_var(phi, m)
  compile_fom(phi, m) → HFunctionTable
  ffom_assemble(table, k) → callable
  target_zero / target_input_bits / target_length — bit-graph formulas

Usage:
    phi = parse_fom("(M y1 (wbit y1))")
    eval_formula(phi, WordModel("110"))          # True
    table = compile_fom(phi, 0)
    table.truth("110", ())                       # True
"""

import bisect
import logging
import re
from dataclasses import dataclass, field
from typing import Callable

import blockvec
from errors import DomainError, FormulaSyntaxError, UnboundVariableError
from natcore import band, div_floor, length, log2_floor, monus, mul, pow2, require_nat
from settings import check_bits, current

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class WordLen:
    pass


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"variable index must be >= 1, got {self.index}")


FomTerm = One | WordLen | Var


@dataclass(frozen=True)
class Leq:
    left: FomTerm
    right: FomTerm


@dataclass(frozen=True)
class Bit:
    value: FomTerm
    position: FomTerm


@dataclass(frozen=True)
class WordBit:
    position: FomTerm


@dataclass(frozen=True)
class And:
    left: "FomFormula"
    right: "FomFormula"


@dataclass(frozen=True)
class Or:
    left: "FomFormula"
    right: "FomFormula"


@dataclass(frozen=True)
class Not:
    body: "FomFormula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "FomFormula"


@dataclass(frozen=True)
class Forall:
    var: int
    body: "FomFormula"


@dataclass(frozen=True)
class Majority:
    var: int
    body: "FomFormula"


FomFormula = Leq | Bit | WordBit | And | Or | Not | Exists | Forall | Majority

_QUANTIFIERS = {"E": Exists, "A": Forall, "M": Majority}
_QUANTIFIER_NAMES = {Exists: "E", Forall: "A", Majority: "M"}


def _term_vars(t: FomTerm) -> frozenset[int]:
    return frozenset({t.index}) if isinstance(t, Var) else frozenset()


def free_vars(phi: FomFormula) -> frozenset[int]:
    match phi:
        case Leq(a, b) | Bit(a, b):
            return _term_vars(a) | _term_vars(b)
        case WordBit(t):
            return _term_vars(t)
        case And(a, b) | Or(a, b):
            return free_vars(a) | free_vars(b)
        case Not(a):
            return free_vars(a)
        case Exists(v, body) | Forall(v, body) | Majority(v, body):
            return free_vars(body) - {v}
    raise DomainError(f"not a FOM formula: {phi!r}")


def _free_map(phi: FomFormula, out: dict[int, frozenset[int]]) -> frozenset[int]:
    """free_vars for every node, keyed by id()."""
    match phi:
        case And(a, b) | Or(a, b):
            fv = _free_map(a, out) | _free_map(b, out)
        case Not(a):
            fv = _free_map(a, out)
        case Exists(v, body) | Forall(v, body) | Majority(v, body):
            fv = _free_map(body, out) - {v}
        case _:
            fv = free_vars(phi)
    out[id(phi)] = fv
    return fv


# ---------------------------------------------------------------------------
# s-expression reader / printer
# ---------------------------------------------------------------------------

_SEXPR_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|(?P<atom>[^\s()]+))")
_VAR_NAME = re.compile(r"y([1-9][0-9]*)$")


def _sexpr_tokens(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while text[pos:].strip():
        match = _SEXPR_TOKEN.match(text, pos)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class _FomReader:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _sexpr_tokens(text)
        self.i = 0

    def _next(self):
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of input", self.text, len(self.text))
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _fail(self, message: str, tok):
        raise FormulaSyntaxError(message, self.text, tok[2])

    def _var(self, tok) -> int:
        match = _VAR_NAME.match(tok[1]) if tok[0] == "atom" else None
        if not match:
            self._fail(f"expected a variable y1, y2, …, got {tok[1]!r}", tok)
        return int(match.group(1))

    def term(self) -> FomTerm:
        tok = self._next()
        if tok[0] == "atom" and tok[1] == "1":
            return One()
        if tok[0] == "atom" and tok[1] == "len":
            return WordLen()
        return Var(self._var(tok))

    def _close(self):
        tok = self._next()
        if tok[0] != "close":
            self._fail("expected ')'", tok)

    def formula(self) -> FomFormula:
        tok = self._next()
        if tok[0] != "open":
            self._fail("expected '('", tok)
        head = self._next()
        if head[0] != "atom":
            self._fail("expected an operator", head)
        op = head[1]
        if op in ("leq", "bit"):
            a, b = self.term(), self.term()
            self._close()
            return Leq(a, b) if op == "leq" else Bit(a, b)
        if op == "wbit":
            t = self.term()
            self._close()
            return WordBit(t)
        if op == "not":
            body = self.formula()
            self._close()
            return Not(body)
        if op in ("and", "or"):
            parts = [self.formula(), self.formula()]
            while self.i < len(self.tokens) and self.tokens[self.i][0] == "open":
                parts.append(self.formula())
            self._close()
            node = And if op == "and" else Or
            out = parts[0]
            for p in parts[1:]:
                out = node(out, p)
            return out
        if op in _QUANTIFIERS:
            var = self._var(self._next())
            body = self.formula()
            self._close()
            return _QUANTIFIERS[op](var, body)
        self._fail(f"unknown operator {op!r}", head)

    def parse(self) -> FomFormula:
        phi = self.formula()
        if self.i != len(self.tokens):
            self._fail("trailing input", self.tokens[self.i])
        return phi


def parse_fom(text: str) -> FomFormula:
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    return _FomReader(text).parse()


def _term_text(t: FomTerm) -> str:
    if isinstance(t, One):
        return "1"
    if isinstance(t, WordLen):
        return "len"
    return f"y{t.index}"


def to_sexpr(phi: FomFormula) -> str:
    match phi:
        case Leq(a, b):
            return f"(leq {_term_text(a)} {_term_text(b)})"
        case Bit(a, b):
            return f"(bit {_term_text(a)} {_term_text(b)})"
        case WordBit(t):
            return f"(wbit {_term_text(t)})"
        case And(a, b):
            return f"(and {to_sexpr(a)} {to_sexpr(b)})"
        case Or(a, b):
            return f"(or {to_sexpr(a)} {to_sexpr(b)})"
        case Not(a):
            return f"(not {to_sexpr(a)})"
        case Exists(v, body) | Forall(v, body) | Majority(v, body):
            return f"({_QUANTIFIER_NAMES[type(phi)]} y{v} {to_sexpr(body)})"
    raise DomainError(f"not a FOM formula: {phi!r}")


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------

def check_word(word: str) -> None:
    if not word or set(word) - {"0", "1"}:
        raise DomainError(f"word must be a non-empty 0/1 string, got {word!r}")


@dataclass(frozen=True)
class WordModel:
    word: str
    assignment: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        check_word(self.word)
        for var, pos in self.assignment.items():
            if not 1 <= pos <= len(self.word):
                raise DomainError(f"y{var}={pos} is outside 1..{len(self.word)}")


def _term_value(t: FomTerm, n: int, env: dict[int, int]) -> int:
    if isinstance(t, One):
        return 1
    if isinstance(t, WordLen):
        return n
    if t.index not in env:
        raise UnboundVariableError(f"y{t.index}")
    return env[t.index]


def eval_term(t: FomTerm, model: WordModel) -> int:
    return _term_value(t, len(model.word), model.assignment)


def eval_formula(phi: FomFormula, model: WordModel) -> bool:
    """Truth of phi in the model; subformula results are cached per free-variable values."""
    word = model.word
    n = len(word)
    free = {}
    _free_map(phi, free)
    cache: dict[tuple, bool] = {}

    def ev(node, env: dict[int, int]) -> bool:
        fv = free[id(node)]
        try:
            key = (id(node), tuple(sorted((v, env[v]) for v in fv)))
        except KeyError as exc:
            raise UnboundVariableError(f"y{exc.args[0]}") from None
        if key in cache:
            return cache[key]
        match node:
            case Leq(a, b):
                result = _term_value(a, n, env) <= _term_value(b, n, env)
            case Bit(a, b):
                result = bool((_term_value(a, n, env) >> (_term_value(b, n, env) - 1)) & 1)
            case WordBit(t):
                result = word[_term_value(t, n, env) - 1] == "1"
            case And(a, b):
                result = ev(a, env) and ev(b, env)
            case Or(a, b):
                result = ev(a, env) or ev(b, env)
            case Not(a):
                result = not ev(a, env)
            case Exists(v, body):
                result = any(ev(body, {**env, v: p}) for p in range(1, n + 1))
            case Forall(v, body):
                result = all(ev(body, {**env, v: p}) for p in range(1, n + 1))
            case Majority(v, body):
                result = 2 * sum(ev(body, {**env, v: p}) for p in range(1, n + 1)) > n
        cache[key] = result
        return result

    return ev(phi, dict(model.assignment))


# ---------------------------------------------------------------------------
# Word encodings of number tuples
# ---------------------------------------------------------------------------

def code(xs: list[int]) -> str:
    """"01" s₁ "01" s₂ … "01"; sᵢ is the binary notation of xᵢ with each digit doubled."""
    require_nat(*xs)
    parts = ["01"]
    for x in xs:
        digits = format(x, "b") if x else ""
        parts.append("".join(d * 2 for d in digits))
        parts.append("01")
    return "".join(parts)


def ext(alpha: str, n: int) -> str:
    """Pad alpha with zeros on the right up to length n."""
    if n < len(alpha):
        raise DomainError(f"ext: cannot shrink a word of length {len(alpha)} to {n}")
    return alpha + "0" * (n - len(alpha))


def code_var(xs: list[int], k: int) -> str:
    c = code(xs)
    return ext(c, 2 * len(c) ** k)


def code_alt(xs: list[int], k: int, y: int) -> str:
    """Interleave ext(CODE, |CODE|^k) with the binary digits of y, lowest digit first."""
    c = code(xs)
    alpha = ext(c, len(c) ** k)
    if y < 0 or y.bit_length() > len(alpha):
        raise DomainError(f"code_alt: y must be below 2^{len(alpha)}")
    return "".join(a + str((y >> j) & 1) for j, a in enumerate(alpha))


def lcode(xs: list[int], k: int) -> int:
    """Length of code_var(xs, k): 2^{k+1}(Σ len(xᵢ) + n + 1)^k."""
    require_nat(*xs)
    return pow2(k + 1) * (sum(length(x) for x in xs) + len(xs) + 1) ** k


def _doubled(x: int) -> int:
    n = length(x)
    return 3 * blockvec.incr(x, n, 2) if n else 0


def code_value(xs: list[int], k: int) -> int:
    """The number whose lcode(xs, k)-bit notation is code_var(xs, k)."""
    l = lcode(xs, k)
    check_bits("code_value", l)
    total = 0
    used = 0
    for i, x in enumerate(xs, 1):
        total += pow2(monus(l, 2 * i + used))
        used += 2 * length(x)
        total += mul(pow2(monus(l, 2 * i + used)), _doubled(x))
    return total + pow2(monus(l, 2 * (len(xs) + 1) + used))


# ---------------------------------------------------------------------------
# Derived formulas
# ---------------------------------------------------------------------------

def lt(a: FomTerm, b: FomTerm) -> FomFormula:
    return And(Leq(a, b), Not(Leq(b, a)))


def gt(a: FomTerm, b: FomTerm) -> FomFormula:
    return lt(b, a)


def eq(a: FomTerm, b: FomTerm) -> FomFormula:
    return And(Leq(a, b), Leq(b, a))


def implies(p: FomFormula, q: FomFormula) -> FomFormula:
    return Or(Not(p), q)


def iff(p: FomFormula, q: FomFormula) -> FomFormula:
    return Or(And(p, q), And(Not(p), Not(q)))


def conj(*parts: FomFormula) -> FomFormula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: FomFormula) -> FomFormula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def succ_of(s: FomTerm, t: FomTerm, helper: int) -> FomFormula:
    """s = t + 1: s > t with no position strictly between."""
    h = Var(helper)
    return And(gt(s, t), Not(Exists(helper, And(gt(s, h), gt(h, t)))))


def double_of(w: FomTerm, v: FomTerm, a: int, b: int, helper: int) -> FomFormula:
    """w = 2v: bit b of w equals bit b−1 of v, bit 0 of w and bit |X|−1 of v are clear."""
    va, vb = Var(a), Var(b)
    shifted = Forall(a, Forall(b, implies(succ_of(va, vb, helper), iff(Bit(w, va), Bit(v, vb)))))
    return conj(shifted, Not(Bit(w, One())), Not(Bit(v, WordLen())))


class _VarPool:
    def __init__(self, start: int, limit: int):
        self.next = start
        self.start = start
        self.limit = limit

    def take(self) -> int:
        if self.next - self.start >= self.limit:
            raise DomainError(f"fresh variable pool of {self.limit} exhausted")
        v = self.next
        self.next += 1
        return v


# ---------------------------------------------------------------------------
# alt → var rewrite
# ---------------------------------------------------------------------------

def rewrite_alt_to_var(phi: FomFormula, m: int) -> FomFormula:
    """Replace every X⟨t⟩ so that truth on code_alt(x̃, k, y) becomes truth on
    code_var(x̃, k) with y held by variable m+1.

    Even positions t = 2u of the interleaved word carry bit u−1 of y; odd
    positions t = 2v−1 carry symbol v of the padded code. Helper variables
    are numbered from m+2 upward in order of appearance.
    """
    if free_vars(phi) - set(range(1, m + 1)):
        raise DomainError(f"formula has free variables outside y1..y{m}")
    y = Var(m + 1)
    pool = _VarPool(m + 2, current().fresh_var_pool)

    def rw(node):
        match node:
            case WordBit(t):
                u, v, w = pool.take(), pool.take(), pool.take()
                a, b, h = pool.take(), pool.take(), pool.take()
                even = Exists(u, And(double_of(t, Var(u), a, b, h), Bit(y, Var(u))))
                odd = Exists(v, Exists(w, conj(
                    double_of(Var(w), Var(v), a, b, h),
                    succ_of(Var(w), t, h),
                    WordBit(Var(v)),
                )))
                return Or(even, odd)
            case And(a, b):
                return And(rw(a), rw(b))
            case Or(a, b):
                return Or(rw(a), rw(b))
            case Not(a):
                return Not(rw(a))
            case Exists(v, body) | Forall(v, body) | Majority(v, body):
                return type(node)(v, rw(body))
        return node

    out = rw(phi)
    logger.debug("alt→var rewrite allocated %d helper variables", pool.next - pool.start)
    return out


# ---------------------------------------------------------------------------
# Compilation to h-function tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HFunctionTable:
    arity: int
    f: Callable[[int, int], int]

    def __call__(self, x: int, z: int) -> int:
        return self.f(x, z)

    def table_for(self, word: str) -> int:
        check_word(word)
        return self.f(int(word, 2), pow2(len(word)))

    def truth(self, word: str, assignment: tuple[int, ...]) -> bool:
        """Read the cell for (y₁,…,y_m) = assignment out of the table for word."""
        l = len(word)
        cell = sum((y - 1) * l ** j for j, y in enumerate(assignment))
        return bool((self.table_for(word) >> (cell * l)) & 1)


@dataclass(frozen=True)
class _Table:
    vars: tuple[int, ...]
    value: int


class _Compiler:
    """Tables over the variables free at each node; cells are l bits wide."""

    def __init__(self, x: int, l: int):
        self.x = x
        self.l = l
        self._reversed = None

    def cells(self, k: int) -> int:
        return self.l ** k

    def _guard(self, k: int) -> None:
        check_bits("compile_fom table", self.l ** (k + 1))

    @property
    def reversed_word(self) -> int:
        if self._reversed is None:
            self._reversed = blockvec.reverse_bits(self.x, self.l)
        return self._reversed

    # -- term tables --------------------------------------------------------

    def term_value(self, t: FomTerm) -> _Table:
        l = self.l
        if isinstance(t, One):
            return _Table((), 1)
        if isinstance(t, WordLen):
            return _Table((), l)
        r = pow2(l)
        ramp = div_floor(monus(mul(l, pow2(l * (l + 1))), mul(l + 1, pow2(l * l))) + 1,
                         mul(monus(r, 1), monus(r, 1)))
        return _Table((t.index,), ramp)

    def term_power(self, t: FomTerm) -> _Table:
        """Table of 2^{h(t)−1}."""
        l = self.l
        if isinstance(t, One):
            return _Table((), 1)
        if isinstance(t, WordLen):
            return _Table((), pow2(l - 1))
        return _Table((t.index,), blockvec.rep(1, l, l + 1))

    # -- shape ----------------------------------------------------------------

    def insert(self, table: _Table, var: int) -> _Table:
        l = self.l
        j = bisect.bisect(table.vars, var)
        k = len(table.vars)
        self._guard(k + 1)
        chunk = l ** (j + 1)
        spread = blockvec.respace(table.value, l ** (k - j), chunk, chunk * l)
        value = mul(spread, blockvec.rep(1, l, chunk))
        return _Table(table.vars[:j] + (var,) + table.vars[j:], value)

    def widen(self, table: _Table, variables) -> _Table:
        for v in sorted(set(variables) - set(table.vars)):
            table = self.insert(table, v)
        return table

    def align(self, a: _Table, b: _Table) -> tuple[_Table, _Table]:
        union = set(a.vars) | set(b.vars)
        return self.widen(a, union), self.widen(b, union)

    # -- atoms ------------------------------------------------------------------

    def _nonzero(self, table: _Table) -> _Table:
        """1 in every cell whose value is non-zero."""
        n = self.cells(len(table.vars))
        zero = blockvec.cmpeq(table.value, 0, n, self.l)
        return _Table(table.vars, monus(blockvec.rep(1, n, self.l), blockvec.incr(zero, n, self.l)))

    def leq(self, a: FomTerm, b: FomTerm) -> _Table:
        ta, tb = self.align(self.term_value(a), self.term_value(b))
        n = self.cells(len(ta.vars))
        bits = blockvec.cmp(tb.value, ta.value, n, self.l)
        return _Table(ta.vars, blockvec.incr(bits, n, self.l))

    def bit(self, value: FomTerm, position: FomTerm) -> _Table:
        tv, tp = self.align(self.term_value(value), self.term_power(position))
        return self._nonzero(_Table(tv.vars, band(tv.value, tp.value)))

    def word_bit(self, position: FomTerm) -> _Table:
        tp = self.term_power(position)
        n = self.cells(len(tp.vars))
        return self._nonzero(_Table(tp.vars, band(blockvec.rep(self.reversed_word, n, self.l), tp.value)))

    # -- connectives ------------------------------------------------------------

    def conjunction(self, a: _Table, b: _Table) -> _Table:
        a, b = self.align(a, b)
        return _Table(a.vars, band(a.value, b.value))

    def disjunction(self, a: _Table, b: _Table) -> _Table:
        a, b = self.align(a, b)
        bits = self.cells(len(a.vars)) * self.l
        return _Table(a.vars, blockvec.bitlogic(a.value, b.value, bits, "or"))

    def negation(self, a: _Table) -> _Table:
        n = self.cells(len(a.vars))
        flipped = blockvec.bitlogic(a.value, 0, n * self.l, "not")
        return _Table(a.vars, band(flipped, blockvec.rep(1, n, self.l)))

    # -- quantifiers ------------------------------------------------------------

    def quantify(self, table: _Table, var: int, threshold: int) -> _Table:
        """Cells of the remaining variables where at least `threshold` values of var hold."""
        if var not in table.vars:
            return table
        l = self.l
        j = table.vars.index(var)
        rest = table.vars[:j] + table.vars[j + 1:]
        n = self.cells(len(rest))
        if j == 0:
            counts = blockvec.sum_blocks(table.value, n, l, l)
            hits = blockvec.cmp(counts, blockvec.rep(threshold, n, l * l), n, l * l)
        else:
            k = len(table.vars)
            stride = l ** (j + 1)
            summed = mul(table.value, blockvec.rep(1, l, stride))
            top = mul(monus(pow2(stride), 1), pow2((l - 1) * stride))
            mask = mul(top, blockvec.rep(1, l ** (k - 1 - j), stride * l))
            layer = div_floor(band(summed, mask), pow2((l - 1) * stride))
            counts = blockvec.respace(layer, l ** (k - 1 - j), stride * l, stride)
            hits = blockvec.cmp(counts, blockvec.rep(threshold, n, l), n, l)
        return _Table(rest, blockvec.incr(hits, n, l))

    def thresholds(self) -> dict[type, int]:
        return {Exists: 1, Forall: self.l, Majority: self.l // 2 + 1}

    # -- driver -------------------------------------------------------------------

    def compile(self, node: FomFormula) -> _Table:
        match node:
            case Leq(a, b):
                return self.leq(a, b)
            case Bit(a, b):
                return self.bit(a, b)
            case WordBit(t):
                return self.word_bit(t)
            case And(a, b):
                return self.conjunction(self.compile(a), self.compile(b))
            case Or(a, b):
                return self.disjunction(self.compile(a), self.compile(b))
            case Not(a):
                return self.negation(self.compile(a))
            case Exists(v, body) | Forall(v, body) | Majority(v, body):
                return self.quantify(self.compile(body), v, self.thresholds()[type(node)])
        raise DomainError(f"not a FOM formula: {node!r}")


def compile_fom(phi: FomFormula, m: int) -> HFunctionTable:
    """h-function table of phi over y₁..y_m.

    Free variables must lie in 1..m; bound variables may use any index.
    """
    extra = free_vars(phi) - set(range(1, m + 1))
    if extra:
        raise DomainError(f"free variables {sorted(extra)} outside y1..y{m}")

    def f(x: int, z: int) -> int:
        l = log2_floor(z)
        if l < 1:
            raise DomainError("compile_fom: words must be non-empty (z >= 2)")
        check_bits("compile_fom table", l ** (m + 1))
        compiler = _Compiler(x, l)
        table = compiler.widen(compiler.compile(phi), range(1, m + 1))
        return table.value

    return HFunctionTable(m, f)


# ---------------------------------------------------------------------------
# Function assembly from a bit-graph table
# ---------------------------------------------------------------------------

def ffom_assemble(table: HFunctionTable, k: int) -> Callable[..., int]:
    """f(x̃) from the table of ρ(X, z₁,…,z_m, y) ≡ bit y−1 of f(x̃) on X = code_var(x̃, k).

    The last table variable is y; the others must not change the value.
    """
    m = table.arity - 1
    if m < 0:
        raise DomainError("ffom_assemble: the table needs the answer variable")

    def f(*xs: int) -> int:
        l = lcode(list(xs), k)
        check_bits("ffom_assemble", l ** (m + 2))
        g = table(code_value(list(xs), k), pow2(l))
        r = div_floor(g, blockvec.rep(1, l ** m, l))
        return blockvec.decr(r, l, l ** (m + 1))

    return f


# ---------------------------------------------------------------------------
# Bit-graph formulas over code_var(x, 1) for a single input x
# ---------------------------------------------------------------------------
# In code_var(x, 1) the doubled digits of x sit between the markers at
# positions 1-2 and e, e+1 (e odd); d = e − 1 is the last position of the
# lowest digit pair. Bit j of x is the pair at d − 2j − 1, d − 2j.

def _back(start: FomTerm, steps: int, pool: _VarPool, body: Callable[[FomTerm], FomFormula]) -> FomFormula:
    """body(p) for the position p = start − steps."""
    if steps == 0:
        return body(start)
    p = pool.take()
    h = pool.take()
    return Exists(p, And(succ_of(start, Var(p), h), _back(Var(p), steps - 1, pool, body)))


def _before_marker(d: FomTerm, pool: _VarPool) -> FomFormula:
    a, b, h = pool.take(), pool.take(), pool.take()
    closing = Exists(a, conj(
        succ_of(Var(a), d, h),
        Not(WordBit(Var(a))),
        Exists(b, And(succ_of(Var(b), Var(a), h), WordBit(Var(b)))),
    ))
    return And(Not(Bit(d, One())), closing)


def _digit(d: FomTerm, j: int, pool: _VarPool) -> FomFormula:
    def pair(p: FomTerm) -> FomFormula:
        return And(WordBit(p), _back(p, 1, pool, WordBit))
    return _back(d, 2 * j, pool, pair)


def _equals_const(t: FomTerm, c: int, pool: _VarPool) -> FomFormula:
    return _back(t, c - 1, pool, lambda p: Leq(p, One()))


def target_zero() -> FomFormula:
    return Not(Leq(One(), One()))


def target_input_bits(bits: list[int]) -> FomFormula:
    """y₁ − 1 ∈ bits and that bit of x is set: f(x) = x ∧ Σ 2^j."""
    if not bits:
        return target_zero()
    pool = _VarPool(2, current().fresh_var_pool)
    d = pool.take()
    choices = [And(_equals_const(Var(1), j + 1, pool), _digit(Var(d), j, pool)) for j in bits]
    return Exists(d, And(_before_marker(Var(d), pool), disj(*choices)))


def target_length() -> FomFormula:
    """Bit y₁ − 1 of len(x): position d − 2 equals 2·len(x)."""
    pool = _VarPool(2, current().fresh_var_pool)
    d = pool.take()

    def length_bit(g: FomTerm) -> FomFormula:
        s, h = pool.take(), pool.take()
        return Exists(s, And(succ_of(Var(s), Var(1), h), Bit(g, Var(s))))

    return Exists(d, And(_before_marker(Var(d), pool), _back(Var(d), 2, pool, length_bit)))
