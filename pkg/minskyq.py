"""
Minsky machines and their compilation to one value of the function Q.

A k-tape Minsky machine is non-erasing: every tape carries a single mark
in cell 0, so a head reads 1 exactly when it stands on cell 0. State 0 is
final, state 1 initial; the result is the position of head 1.

The chain implemented here:

    MinskyMachine ──reduce──▶ ReducedMachine ──decompose──▶ [SimpleVectorFn]
        ──simple_to_simplistic──▶ [SimplisticFn] ──compile──▶ QParams

and q_eval(params) followed by the extractor gives back the machine's
result.

Exports:
  Command, MinskyMachine, Branch, ReducedRow, ReducedMachine, Configuration
  SimpleVectorFn, SimplisticFn, ConfigCodeParams, QParams
  parse_machine(text) / load_machine(path) / format_machine(m)
  step(m, c) / run(m, inputs, max_steps)
  reduce(m) / decompose(m) / state_space(m)
  config_code(c, p) / config_decode(x, k, p)
  simple_to_simplistic(F, p, s)
  q_eval(p) / q_params_for(u, v, x, t) / q_prop_check(u, v, p)
  compile(m, inputs, time_poly) → (QParams, extractor)
  step_ratio(m, inputs)

Usage:
    m = load_machine("data/machines/inc.mm")
    run(m, [3])                              # (4, 1)
    params, extract = compile(m, [3], lambda y: 2)
    extract(q_eval(params))                  # 4
"""

import functools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from errors import (
    DomainError,
    HypothesisViolation,
    MachineFormatError,
    StepBudgetError,
    StuckMachineError,
    TimeBoundError,
)
from natcore import band, length, pow2, rm, rot_r
from settings import check_steps, current

logger = logging.getLogger(__name__)

_MOVES = {"L": -1, "N": 0, "R": 1}
_MOVE_LETTERS = {v: k for k, v in _MOVES.items()}


# ---------------------------------------------------------------------------
# Machines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Command:
    read: tuple[int, ...]
    state: int
    moves: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class MinskyMachine:
    tapes: int
    states: int
    commands: tuple[Command, ...]

    def __post_init__(self):
        if self.tapes < 1 or self.states < 1:
            raise MachineFormatError("a machine needs at least one tape and one state")
        seen = set()
        for c in self.commands:
            if len(c.read) != self.tapes or len(c.moves) != self.tapes:
                raise MachineFormatError(f"command {c} does not match {self.tapes} tapes")
            if not 1 <= c.state < self.states or not 0 <= c.target < self.states:
                raise MachineFormatError(f"command {c} uses a state outside 0..{self.states - 1}")
            if any(e not in (0, 1) for e in c.read) or any(d not in (-1, 0, 1) for d in c.moves):
                raise MachineFormatError(f"command {c} has a bad read or move symbol")
            if any(e == 1 and d == -1 for e, d in zip(c.read, c.moves)):
                raise MachineFormatError(f"command {c} moves a head left of cell 0")
            if (c.read, c.state) in seen:
                raise MachineFormatError(f"two commands for read {c.read} in state {c.state}")
            seen.add((c.read, c.state))

    @functools.cached_property
    def table(self) -> dict[tuple[tuple[int, ...], int], Command]:
        return {(c.read, c.state): c for c in self.commands}


@dataclass(frozen=True)
class Branch:
    moves: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class ReducedRow:
    state: int
    tape: int
    on_zero: Branch
    on_one: Branch


@dataclass(frozen=True)
class ReducedMachine:
    """One row per non-final state; row q reads only tape `tape`.

    States in `stuck` keep a row so the machine stays decomposable, but
    stepping from one raises StuckMachineError.
    """

    tapes: int
    states: int
    rows: tuple[ReducedRow, ...]
    stuck: frozenset[int] = frozenset()

    def __post_init__(self):
        if sorted(r.state for r in self.rows) != list(range(1, self.states)):
            raise MachineFormatError(f"a reduced machine needs exactly one row per state 1..{self.states - 1}")
        for r in self.rows:
            if not 1 <= r.tape <= self.tapes:
                raise MachineFormatError(f"row {r.state} reads tape {r.tape} of {self.tapes}")
            for b in (r.on_zero, r.on_one):
                if len(b.moves) != self.tapes or not 0 <= b.target < self.states:
                    raise MachineFormatError(f"row {r.state} has a malformed branch {b}")
            if r.on_one.moves[r.tape - 1] == -1:
                raise MachineFormatError(f"row {r.state} moves head {r.tape} left of cell 0")
        if not self.stuck <= set(range(1, self.states)):
            raise MachineFormatError(f"stuck states {sorted(self.stuck)} outside 1..{self.states - 1}")

    @functools.cached_property
    def table(self) -> dict[int, ReducedRow]:
        return {r.state: r for r in self.rows}


Machine = MinskyMachine | ReducedMachine


@dataclass(frozen=True)
class Configuration:
    heads: tuple[int, ...]
    state: int


# ---------------------------------------------------------------------------
# Machine files
# ---------------------------------------------------------------------------

def _parse_moves(tokens: list[str], k: int, lineno: int) -> tuple[int, ...]:
    if len(tokens) != k or any(t not in _MOVES for t in tokens):
        raise MachineFormatError(f"expected {k} moves from L/N/R, got {' '.join(tokens)!r}", lineno)
    return tuple(_MOVES[t] for t in tokens)


def _parse_int(token: str, lineno: int) -> int:
    if not token.isdigit():
        raise MachineFormatError(f"expected a number, got {token!r}", lineno)
    return int(token)


def parse_machine(text: str) -> Machine:
    """Read the line format: `tapes K`, `states S`, then command lines.

    General command:  E1..EK Q -> D1..DK Q'
    Reduced command:  Q -> I ; D1..DK Q0 ; D1..DK Q1
    Reduced machines may list `stuck Q ...` after the headers.
    """
    header: dict[str, int] = {}
    stuck: set[int] = set()
    general: list[Command] = []
    reduced: list[ReducedRow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] in ("tapes", "states"):
            if len(words) != 2:
                raise MachineFormatError(f"malformed header {line!r}", lineno)
            header[words[0]] = _parse_int(words[1], lineno)
            continue
        if words[0] == "stuck":
            stuck.update(_parse_int(w, lineno) for w in words[1:])
            continue
        if "tapes" not in header or "states" not in header:
            raise MachineFormatError("commands must follow the tapes and states headers", lineno)
        k = header["tapes"]
        if "->" not in words:
            raise MachineFormatError(f"expected '->' in {line!r}", lineno)
        left, right = line.split("->", 1)
        if ";" in right:
            parts = [p.split() for p in right.split(";")]
            if len(parts) != 3 or len(parts[0]) != 1 or len(left.split()) != 1:
                raise MachineFormatError(f"malformed reduced command {line!r}", lineno)
            branches = [
                Branch(_parse_moves(p[:-1], k, lineno), _parse_int(p[-1], lineno)) if p
                else None for p in parts[1:]
            ]
            if None in branches:
                raise MachineFormatError(f"malformed reduced command {line!r}", lineno)
            reduced.append(ReducedRow(
                _parse_int(left.split()[0], lineno), _parse_int(parts[0][0], lineno), *branches))
        else:
            lhs, rhs = left.split(), right.split()
            if len(lhs) != k + 1 or len(rhs) != k + 1:
                raise MachineFormatError(f"malformed command {line!r}", lineno)
            read = tuple(_parse_int(e, lineno) for e in lhs[:-1])
            general.append(Command(read, _parse_int(lhs[-1], lineno),
                                   _parse_moves(rhs[:-1], k, lineno), _parse_int(rhs[-1], lineno)))
    if "tapes" not in header or "states" not in header:
        raise MachineFormatError("missing tapes / states header")
    if general and (reduced or stuck):
        raise MachineFormatError("a file holds either general or reduced commands, not both")
    if reduced:
        return ReducedMachine(header["tapes"], header["states"], tuple(reduced), frozenset(stuck))
    return MinskyMachine(header["tapes"], header["states"], tuple(general))


def load_machine(path: str | Path) -> Machine:
    return parse_machine(Path(path).read_text())


def format_machine(m: Machine) -> str:
    lines = [f"tapes {m.tapes}", f"states {m.states}"]

    def moves(ds):
        return " ".join(_MOVE_LETTERS[d] for d in ds)

    if isinstance(m, ReducedMachine):
        if m.stuck:
            lines.append("stuck " + " ".join(map(str, sorted(m.stuck))))
        for r in sorted(m.rows, key=lambda r: r.state):
            lines.append(f"{r.state} -> {r.tape} ; {moves(r.on_zero.moves)} {r.on_zero.target}"
                         f" ; {moves(r.on_one.moves)} {r.on_one.target}")
    else:
        for c in m.commands:
            lines.append(f"{' '.join(map(str, c.read))} {c.state} -> {moves(c.moves)} {c.target}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def _moved(heads: tuple[int, ...], moves: tuple[int, ...]) -> tuple[int, ...]:
    out = tuple(h + d for h, d in zip(heads, moves))
    if min(out, default=0) < 0:
        raise DomainError(f"head moved left of cell 0: {heads} + {moves}")
    return out


def step(m: Machine, c: Configuration) -> Configuration:
    """One step of the machine; the final configuration maps to itself."""
    if c.state == 0:
        return c
    if isinstance(m, ReducedMachine):
        if c.state in m.stuck:
            raise StuckMachineError(tuple(1 if h == 0 else 0 for h in c.heads), c.state)
        row = m.table[c.state]
        branch = row.on_one if c.heads[row.tape - 1] == 0 else row.on_zero
        return Configuration(_moved(c.heads, branch.moves), branch.target)
    read = tuple(1 if h == 0 else 0 for h in c.heads)
    cmd = m.table.get((read, c.state))
    if cmd is None:
        raise StuckMachineError(read, c.state)
    return Configuration(_moved(c.heads, cmd.moves), cmd.target)


def initial(m: Machine, inputs) -> Configuration:
    inputs = list(inputs)
    if len(inputs) > m.tapes:
        raise DomainError(f"{len(inputs)} inputs for a {m.tapes}-tape machine")
    if any(y < 0 for y in inputs):
        raise DomainError("machine inputs must be non-negative")
    return Configuration(tuple(inputs) + (0,) * (m.tapes - len(inputs)), 1 if m.states > 1 else 0)


def run(m: Machine, inputs, max_steps: int | None = None) -> tuple[int, int]:
    """(position of head 1 at the final state, number of steps)."""
    limit = current().step_budget if max_steps is None else max_steps
    c = initial(m, inputs)
    steps = 0
    while c.state != 0:
        if steps >= limit:
            raise StepBudgetError("run", steps + 1, limit)
        c = step(m, c)
        steps += 1
    return c.heads[0], steps


# ---------------------------------------------------------------------------
# Reduction: read one tape per step
# ---------------------------------------------------------------------------

def reduce(m: Machine) -> ReducedMachine:
    """Each non-final state becomes a read tree of 2^k − 1 states.

    The node at depth d reads tape d+1 and remembers the d bits read so
    far; the last level performs the original command and jumps to the
    root of its target. Root of state 1 is state 1; state 0 stays final.
    A missing command leads to a trap state marked stuck, so running the
    reduced machine raises StuckMachineError where the original would.
    """
    if isinstance(m, ReducedMachine):
        return m
    k = m.tapes
    tree = (1 << k) - 1

    def node(q: int, depth: int, bits: int) -> int:
        return 1 + (q - 1) * tree + (1 << depth) - 1 + bits

    def root(q: int) -> int:
        return 0 if q == 0 else node(q, 0, 0)

    trap = 1 + (m.states - 1) * tree
    still = (0,) * k
    rows = []
    needs_trap = False
    for q in range(1, m.states):
        for depth in range(k):
            for bits in range(1 << depth):
                branches = []
                for e in (0, 1):
                    if depth < k - 1:
                        branches.append(Branch(still, node(q, depth + 1, bits + (e << depth))))
                        continue
                    read = tuple(((bits + (e << depth)) >> j) & 1 for j in range(k))
                    cmd = m.table.get((read, q))
                    if cmd is None:
                        needs_trap = True
                        branches.append(Branch(still, trap))
                    else:
                        branches.append(Branch(cmd.moves, root(cmd.target)))
                rows.append(ReducedRow(node(q, depth, bits), depth + 1, *branches))
    states = trap
    if needs_trap:
        rows.append(ReducedRow(trap, 1, Branch(still, trap), Branch(still, trap)))
        states += 1
    logger.debug("reduced %d-tape machine: %d → %d states", k, m.states, states)
    return ReducedMachine(k, states, tuple(rows), frozenset({trap}) if needs_trap else frozenset())


def step_ratio(m: MinskyMachine, inputs_list) -> float:
    """Largest T_reduced / T over the given inputs (0 when nothing ran)."""
    reduced = reduce(m)
    ratio = 0.0
    for inputs in inputs_list:
        _, t = run(m, inputs)
        _, t_reduced = run(reduced, inputs)
        if t:
            ratio = max(ratio, t_reduced / t)
    return ratio


# ---------------------------------------------------------------------------
# Simple vector functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleVectorFn:
    """Add `shifts` and go to `target` when head `guard` is on cell 0 and the
    state is `guard_state`; guard 0 tests nothing."""

    shifts: tuple[int, ...]
    guard: int
    guard_state: int
    target: int

    def __call__(self, c: Configuration) -> Configuration:
        hit = self.guard == 0 or c.heads[self.guard - 1] == 0
        if hit and c.state == self.guard_state:
            return Configuration(_moved(c.heads, self.shifts), self.target)
        return c


def state_space(m: ReducedMachine) -> int:
    """States used by decompose: the machine's own plus two scratch states per row."""
    return m.states + 2 * (m.states - 1)


def decompose(m: ReducedMachine) -> list[SimpleVectorFn]:
    """Simple functions F₁ … F_m with step(m, ·) = F₁ ∘ F₂ ∘ … ∘ F_m.

    Application order is program order: for every row q, first the e = 1
    branch (head on cell 0) to scratch state a_q, then the e = 0 branch
    (guard 0, still in q) to scratch state b_q; after all rows, a_q and b_q
    are committed to the real targets.
    """
    still = (0,) * m.tapes
    applied: list[SimpleVectorFn] = []
    commits: list[SimpleVectorFn] = []
    for row in sorted(m.rows, key=lambda r: r.state):
        hit = m.states + 2 * (row.state - 1)
        miss = hit + 1
        applied.append(SimpleVectorFn(row.on_one.moves, row.tape, row.state, hit))
        applied.append(SimpleVectorFn(row.on_zero.moves, 0, row.state, miss))
        commits.append(SimpleVectorFn(still, 0, hit, row.on_one.target))
        commits.append(SimpleVectorFn(still, 0, miss, row.on_zero.target))
    return list(reversed(applied + commits))


# ---------------------------------------------------------------------------
# (w; l)-codes and simplistic functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfigCodeParams:
    w: int
    l: int

    def __post_init__(self):
        if self.w < 0 or self.l < 1:
            raise DomainError(f"need w >= 0 and l >= 1, got w={self.w}, l={self.l}")


def config_code(c: Configuration, p: ConfigCodeParams) -> int:
    """Canonical code: head i in bits l(i−1) … li−1, state in bits kl … kl+w−1."""
    if any(h < 0 or h >> p.l for h in c.heads):
        raise DomainError(f"heads {c.heads} do not fit {p.l} bits")
    if c.state < 0 or c.state >> p.w:
        raise DomainError(f"state {c.state} does not fit {p.w} bits")
    code = sum(h << (p.l * i) for i, h in enumerate(c.heads))
    return code + (c.state << (p.l * len(c.heads)))


def config_decode(x: int, k: int, p: ConfigCodeParams) -> Configuration:
    """Inverse of config_code; bits above kl+w−1 are ignored."""
    field = (1 << p.l) - 1
    heads = tuple((x >> (p.l * i)) & field for i in range(k))
    return Configuration(heads, (x >> (p.l * k)) & ((1 << p.w) - 1))


@dataclass(frozen=True)
class SimplisticFn:
    u: int
    v: int

    def __call__(self, x: int) -> int:
        return x + self.v if band(x, self.u) == 0 else x


def simple_to_simplistic(
    f: SimpleVectorFn, p: ConfigCodeParams, states: int
) -> tuple[SimplisticFn, SimplisticFn, SimplisticFn]:
    """f₁, f₂, f₃ acting on (w; l)-codes the way f acts on configurations.

    f₁ subtracts the guard state modulo 2^w, f₂ fires when the guard head
    and the state field are both zero, f₃ adds the guard state back.
    """
    if pow2(p.w) < states:
        raise DomainError(f"2^{p.w} < {states} states")
    k = len(f.shifts)
    if not 0 <= f.guard <= k:
        raise DomainError(f"guard tape {f.guard} outside 0..{k}")
    base = pow2(p.l * k)
    state_mask = (pow2(p.w) - 1) * base
    head_mask = (pow2(p.l) - 1) << (p.l * (f.guard - 1)) if f.guard else 0
    u2 = state_mask + head_mask
    moves = sum(a * pow2(p.l * j) for j, a in enumerate(f.shifts))
    v2 = pow2(p.l * k + p.w) + (pow2(p.w) + f.target - f.guard_state) * base + moves
    return (
        SimplisticFn(0, (pow2(p.w) - f.guard_state) * base),
        SimplisticFn(u2, v2),
        SimplisticFn(0, f.guard_state * base),
    )


# ---------------------------------------------------------------------------
# The function Q
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QParams:
    x: int
    p1: int
    p2: int
    c1: int
    c2: int
    t: int

    def to_json(self) -> dict[str, str]:
        return {name: str(getattr(self, name)) for name in ("x", "p1", "p2", "c1", "c2", "t")}


def q_eval(p: QParams) -> int:
    """Q(x, p₁, p₂, c₁, c₂, t): keep Q when it meets R(p₁, c₁s), else add R(p₂, c₂s)."""
    check_steps("q_eval", p.t)
    q = p.x
    for s in range(p.t):
        if band(q, rot_r(p.p1, p.c1 * s)) == 0:
            q += rot_r(p.p2, p.c2 * s)
    return q


def q_params_for(u: list[int], v: list[int], x: int, t: int) -> tuple[QParams, list[int], list[int]]:
    """Complete the cycle u₀..u_{r−2}, v₀..v_{r−2} with the marker step and pack it.

    Returns the parameters and the full u, v lists of length r.
    """
    if len(u) != len(v):
        raise DomainError("u and v must have the same length")
    c2 = length(x + sum(u) + t * sum(v))
    v_full = list(v) + [pow2(c2 - 1) if c2 else 0]
    p2 = sum(vi << (c2 * i) for i, vi in enumerate(v_full))
    c1 = length(x + 2 * t * p2)
    u_full = list(u) + [pow2(c1) - 1]
    p1 = sum(ui << (c1 * i) for i, ui in enumerate(u_full))
    return QParams(x, p1, p2, c1, c2, t), u_full, v_full


def _hypotheses(u: list[int], v: list[int], p: QParams):
    r = len(u)
    top_v = max(v[:-1], default=0)
    yield 7, "t0 >= 1", p.t >= 1
    yield 5, "u[r-1] = 2^c1 - 1", u[-1] == pow2(p.c1) - 1
    yield 4, "2^(c2-1) <= v[r-1] < 2^c2", p.c2 >= 1 and pow2(p.c2 - 1) <= v[-1] < pow2(p.c2)
    yield 8, "p1 packs u in c1-bit fields", p.p1 == sum(ui << (p.c1 * i) for i, ui in enumerate(u))
    yield 9, "p2 packs v in c2-bit fields", p.p2 == sum(vi << (p.c2 * i) for i, vi in enumerate(v))
    yield 3, "x + 2 p2 t0 < 2^c1", p.x + 2 * p.p2 * p.t < pow2(p.c1)
    yield 2, "x + t0 max(v[:r-1]) < 2^c2", p.x + p.t * top_v < pow2(p.c2)
    yield 6, "u[i] < 2^c2 for i < r-1", all(ui < pow2(p.c2) for ui in u[:r - 1])
    yield 10, "c1 >= c2", p.c1 >= p.c2
    yield 1, "x >= 1", p.x >= 1


def q_prop_check(u: list[int], v: list[int], p: QParams) -> bool:
    """h_{c₂}(Q) against the cyclic composition of the simplistic functions.

    u and v have length r; step i uses (u, v)[i mod r] and the last step
    of every cycle is the identity. Raises HypothesisViolation naming the
    first failed condition.
    """
    if not u or len(u) != len(v):
        raise DomainError("u and v must be non-empty and of equal length")
    for clause, description, holds in _hypotheses(u, v, p):
        if not holds:
            raise HypothesisViolation(clause, description)
    r = len(u)
    expected = p.x
    for i in range(p.t):
        j = i % r
        if j != r - 1:
            expected = SimplisticFn(u[j], v[j])(expected)
    return rm(q_eval(p), pow2(p.c2)) == expected


# ---------------------------------------------------------------------------
# Compiler
# ---------------------------------------------------------------------------

def compile(
    m: Machine, inputs, time_poly: Callable[..., int]
) -> tuple[QParams, Callable[[int], int]]:
    """Q parameters whose value, through the extractor, is the machine's result.

    time_poly bounds the running time of m; a general machine is reduced
    first and its bound multiplied by the number of tapes. The parameters
    are checked against a direct run, and a bound that is too small is a
    TimeBoundError.
    """
    inputs = list(inputs)
    reduced = reduce(m)
    factor = 1 if isinstance(m, ReducedMachine) else m.tapes
    t = factor * time_poly(*inputs)
    if t < 1:
        raise DomainError(f"time bound must be at least 1, got {t}")
    try:
        expected, steps = run(reduced, inputs, max_steps=t)
    except StepBudgetError:
        raise TimeBoundError(f"machine does not halt within the time bound {t}") from None

    k = reduced.tapes
    states = state_space(reduced)
    w = max(1, length(states - 1))
    l = length(t + sum(inputs))
    code = ConfigCodeParams(w, l)
    simplistic = [
        g for f in reversed(decompose(reduced)) for g in simple_to_simplistic(f, code, states)
    ]
    x = ((pow2(w) + 1) << (l * k)) + sum(y << (l * i) for i, y in enumerate(inputs))
    t_q = t * (len(simplistic) + 1)
    params, _, _ = q_params_for([g.u for g in simplistic], [g.v for g in simplistic], x, t_q)
    modulus, field = pow2(params.c2), pow2(l)

    def extractor(q: int) -> int:
        return rm(rm(q, modulus), field)

    logger.info("compiled %d-tape machine: w=%d l=%d r=%d t'=%d c1=%d c2=%d",
                k, w, l, len(simplistic) + 1, t_q, params.c1, params.c2)
    actual = extractor(q_eval(params))
    if actual != expected:
        raise TimeBoundError(f"Q gives {actual}, the machine gives {expected} after {steps} steps")
    return params, extractor
