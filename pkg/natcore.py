"""
Exact arithmetic on non-negative integers: the basis-function catalog.

Every value is a plain Python int >= 0. Operations are total: division
and remainder by zero give 0, ⌊log₂0⌋ is 0, and the few functions that
can blow up (powers, towers) consult the bit budget before building a
value.

Exports:
  monus, rm, div_floor, bit_get, length (len), log2_floor, band, rot_r,
  min_pow2, exp_logsq, pow_log, pow2, sg, sgbar, succ, add, mul
  mul_by_powers(x, y)            — xy from division and exp_logsq only
  bounded_sum / bounded_count / bounded_mu / bounded_recursion
  grzegorczyk(n, x, y)           — the hierarchy's generating functions fₙ
  require_nat(*values)           — DomainError unless every value is a Nat
"""

import functools
import logging

from errors import DomainError
from settings import check_bits, check_iterations

logger = logging.getLogger(__name__)


def require_nat(*values) -> None:
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise DomainError(f"expected a non-negative integer, got {v!r}")


def _nat_args(fn):
    @functools.wraps(fn)
    def wrapper(*args):
        require_nat(*args)
        return fn(*args)
    return wrapper


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

@_nat_args
def succ(x: int) -> int:
    return x + 1


@_nat_args
def add(x: int, y: int) -> int:
    return x + y


@_nat_args
def mul(x: int, y: int) -> int:
    check_bits("mul", x.bit_length() + y.bit_length())
    return x * y


@_nat_args
def monus(x: int, y: int) -> int:
    """x ∸ y = max(x − y, 0)."""
    return x - y if x > y else 0


@_nat_args
def rm(x: int, y: int) -> int:
    """Remainder of x by y; 0 when y = 0."""
    return x % y if y else 0


@_nat_args
def div_floor(x: int, y: int) -> int:
    """⌊x/y⌋; 0 when y = 0."""
    return x // y if y else 0


@_nat_args
def sg(x: int) -> int:
    return 1 if x else 0


@_nat_args
def sgbar(x: int) -> int:
    return 0 if x else 1


# ---------------------------------------------------------------------------
# Bit access
# ---------------------------------------------------------------------------

@_nat_args
def bit_get(x: int, y: int) -> int:
    """y-th binary digit of x (0-based from the least significant end)."""
    return (x >> y) & 1


@_nat_args
def length(x: int) -> int:
    """len(x): binary length for x > 0, 0 for x = 0."""
    return x.bit_length()


@_nat_args
def log2_floor(x: int) -> int:
    """⌊log₂x⌋ with ⌊log₂0⌋ = 0."""
    return x.bit_length() - 1 if x else 0


@_nat_args
def band(x: int, y: int) -> int:
    return x & y


@_nat_args
def rot_r(x: int, y: int) -> int:
    """Cyclic right shift of the binary notation of x by y places.

    The rotation width is len(x); 0 and 1 are fixed points.
    """
    if x < 2:
        return x
    n = x.bit_length()
    y %= n
    if y == 0:
        return x
    return ((x >> y) | (x << (n - y))) & ((1 << n) - 1)


# ---------------------------------------------------------------------------
# Exponential basis functions (budget-guarded)
# ---------------------------------------------------------------------------

@_nat_args
def pow2(x: int) -> int:
    check_bits("pow2", x + 1)
    return 1 << x


@_nat_args
def min_pow2(x: int, y: int) -> int:
    """min(x, 2^y); 2^y is only built when it is the smaller value."""
    if x.bit_length() <= y:
        return x
    return 1 << y


@_nat_args
def exp_logsq(x: int) -> int:
    """2^(⌊log₂x⌋²); exp_logsq(0) = 1."""
    e = log2_floor(x) ** 2
    check_bits("exp_logsq", e + 1)
    return 1 << e


@_nat_args
def pow_log(x: int, y: int) -> int:
    """x^⌊log₂y⌋."""
    e = log2_floor(y)
    if e == 0:
        return 1
    check_bits("pow_log", e * x.bit_length())
    return x ** e


@_nat_args
def mul_by_powers(x: int, y: int) -> int:
    """xy = ⌊A / ⌊⌊A/x⌋/y⌋⌋ with A = g(g(x+y)), g(u) = exp_logsq(2u).

    A is a power of two above (xy)², so the nested divisions lose nothing.
    """
    a = exp_logsq(2 * exp_logsq(2 * (x + y)))
    return div_floor(a, div_floor(div_floor(a, x), y))


# ---------------------------------------------------------------------------
# Bounded operators
# ---------------------------------------------------------------------------

def bounded_sum(g, x: int, *args: int) -> int:
    """Σ_{y<x} g(y, *args); the empty sum is 0."""
    require_nat(x, *args)
    check_iterations("bounded_sum", x)
    return sum(g(y, *args) for y in range(x))


def bounded_count(g, x: int, *args: int) -> int:
    """Σ_{y<x} sg(g(y, *args))."""
    require_nat(x, *args)
    check_iterations("bounded_count", x)
    return sum(1 for y in range(x) if g(y, *args))


def bounded_mu(g, x: int, *args: int) -> int:
    """Least y < x with g(y, *args) true, or 0 when there is none."""
    require_nat(x, *args)
    check_iterations("bounded_mu", x)
    for y in range(x):
        if g(y, *args):
            return y
    return 0


def bounded_recursion(g, h, j, args: tuple[int, ...], y: int) -> int:
    """f(args, 0) = g(args), f(args, t+1) = h(args, t, f(args, t)), f ≤ j.

    A step whose value exceeds the bound j(args, t) is a DomainError.
    """
    require_nat(y, *args)
    check_iterations("bounded_recursion", y)
    value = g(*args)
    for t in range(y + 1):
        if t:
            value = h(*args, t - 1, value)
        if value > j(*args, t):
            raise DomainError(f"bounded recursion exceeds its bound at step {t}")
    return value


def grzegorczyk(n: int, x: int, y: int) -> int:
    """fₙ(x, y) of the hierarchy: f₀ = y+1, f₁ = x+y, f₂ = (x+1)(y+1).

    For n ≥ 2, fₙ₊₁(x, ·) is fₙ₊₁(0, ·) iterated 2^x times, with
    fₙ₊₁(0, y) = fₙ(y+1, y+1).
    """
    require_nat(n, x, y)
    if n == 0:
        return y + 1
    if n == 1:
        return x + y
    if n == 2:
        return mul(x + 1, y + 1)
    # 2^64 rounds is past any sane budget; avoids building 2^x for huge x
    rounds = 1 << min(x, 64)
    check_iterations(f"grzegorczyk f{n}", rounds)
    for _ in range(rounds):
        y = grzegorczyk(n - 1, y + 1, y + 1)
    return y
