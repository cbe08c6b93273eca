"""
Block codes ⟨x₀,…,x_{n−1}; l⟩ = Σ xᵢ·2^{i·l} and their combinators.

Every combinator exists twice: a closed formula built only from natcore
operations, and an oracle that decodes the blocks, transforms the list
and encodes it again. The public function validates its preconditions
and then picks a path: the formula when its estimated intermediate size
fits settings.formula_bit_limit, the oracle otherwise (settings.path
forces either one). Raw `*_formula` / `*_oracle` functions skip the
checks and are what the oracle-equivalence tests compare.

Exports:
  BlockVec, SwapAux, encode, encode_blocks, decode
  rep, incrx, respace, swap_n, swap_aux, incr, decr
  bitlogic (not / or / xor), cmp, cmpeq, sum_blocks, reverse_bits
  ssqrt, pow2_log
"""

import itertools
import logging
from dataclasses import dataclass

from errors import DomainError
from natcore import add, band, div_floor, exp_logsq, monus, mul, pow2, rm, sg
from settings import check_bits, check_iterations, current

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Block codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockVec:
    blocks: tuple[int, ...]
    width: int


@dataclass(frozen=True)
class SwapAux:
    base: int
    p: int
    a: int


def encode_blocks(blocks, l: int) -> int:
    blocks = list(blocks)
    if not blocks:
        return 0
    if l > 0 and all(0 <= b < (1 << l) for b in blocks):
        return int("".join(format(b, f"0{l}b") for b in reversed(blocks)), 2)
    return sum(b << (i * l) for i, b in enumerate(blocks))


def encode(v: BlockVec) -> int:
    return encode_blocks(v.blocks, v.width)


def decode(x: int, n: int, l: int) -> BlockVec:
    """Slice the low n·l bits of x into n blocks of width l."""
    if n == 0:
        return BlockVec((), l)
    if l == 0:
        return BlockVec((0,) * n, 0)
    total = n * l
    s = format(x & ((1 << total) - 1), f"0{total}b")
    return BlockVec(tuple(int(s[total - (i + 1) * l: total - i * l], 2) for i in range(n)), l)


def _blocks(x: int, n: int, l: int) -> tuple[int, ...]:
    return decode(x, n, l).blocks


def _dispatch(name: str, estimate: int, formula, oracle):
    s = current()
    if s.path == "formula" or (s.path == "auto" and estimate <= s.formula_bit_limit):
        check_bits(name, estimate)
        logger.debug("%s: formula path, ~%d bits", name, estimate)
        return formula()
    logger.debug("%s: oracle path, formula would need ~%d bits", name, estimate)
    return oracle()


def _positive(name: str, **values: int) -> None:
    for key, v in values.items():
        if v < 1:
            raise DomainError(f"{name}: {key} must be >= 1, got {v}")


def _fits(name: str, x: int, bits: int) -> None:
    if x < 0 or x.bit_length() > bits:
        raise DomainError(f"{name}: value does not fit in {bits} bits")


# ---------------------------------------------------------------------------
# rep: n copies of x in l-bit blocks
# ---------------------------------------------------------------------------

def _ones(n: int, l: int) -> int:
    """⌊(2^{nl} ∸ 1)/(2^l ∸ 1)⌋ = ⟨1,…,1; l⟩."""
    return div_floor(monus(pow2(n * l), 1), monus(pow2(l), 1))


def rep_formula(x: int, n: int, l: int) -> int:
    return mul(x, _ones(n, l))


def rep_oracle(x: int, n: int, l: int) -> int:
    return encode_blocks([x] * n, l)


def rep(x: int, n: int, l: int) -> int:
    _positive("rep", n=n, l=l)
    return _dispatch("rep", n * l + x.bit_length(),
                     lambda: rep_formula(x, n, l), lambda: rep_oracle(x, n, l))


# ---------------------------------------------------------------------------
# incrx / respace: widen blocks from l1 to l2 bits
# ---------------------------------------------------------------------------

def incrx_formula(x: int, n: int, l1: int, l2: int) -> int:
    return band(rep_formula(x, n, l2 - l1), rep_formula(monus(pow2(l1), 1), n, l2))


def incrx_oracle(x: int, n: int, l1: int, l2: int) -> int:
    return encode_blocks(_blocks(x, n, l1), l2)


def _incrx_cost(n: int, l1: int, l2: int) -> int:
    return n * l2 + n * l1


def incrx(x: int, n: int, l1: int, l2: int) -> int:
    _positive("incrx", n=n, l1=l1)
    if l2 < (n + 1) * l1:
        raise DomainError(f"incrx: needs l2 >= (n+1)·l1, got l2={l2}, n={n}, l1={l1}")
    _fits("incrx", x, n * l1)
    return _dispatch("incrx", _incrx_cost(n, l1, l2),
                     lambda: incrx_formula(x, n, l1, l2), lambda: incrx_oracle(x, n, l1, l2))


def respace(x: int, n: int, l1: int, l2: int) -> int:
    """Move n blocks from width l1 to width l2, keeping the low min(l1, l2) bits of each.

    Widening by enough to satisfy incrx's spacing goes through incrx;
    every other shape is handled by re-encoding the decoded blocks.
    """
    _positive("respace", n=n, l1=l1, l2=l2)
    if l1 == l2:
        return x & ((1 << (n * l1)) - 1)
    if l2 >= (n + 1) * l1:
        return incrx(x & ((1 << (n * l1)) - 1), n, l1, l2)
    keep = (1 << min(l1, l2)) - 1
    return encode_blocks([b & keep for b in _blocks(x, n, l1)], l2)


# ---------------------------------------------------------------------------
# swap_n: re-weight exponents k·ī → m·ī
# ---------------------------------------------------------------------------

def swap_aux(q: int, k: list[int], m: list[int]) -> SwapAux:
    """Auxiliary sizes: p separates the spread blocks, a shifts the product window.

    The spread base is max(qⁿ, (q−1)Σk + 1) so that every occupied exponent
    k·ī lies inside the widened block range.
    """
    n = len(k)
    base = max(q ** n, (q - 1) * sum(k) + 1)
    p = base * base + q * (sum(m) + 1)
    a = q * p * (sum(k) + 1)
    return SwapAux(base, p, a)


def _swap_cost(q: int, k: list[int], m: list[int]) -> int:
    aux = swap_aux(q, k, m)
    return len(k) * aux.a + aux.base * aux.p


def swap_formula(x: int, q: int, k: list[int], m: list[int]) -> int:
    n = len(k)
    aux = swap_aux(q, k, m)
    p, a = aux.p, aux.a
    product = incrx_formula(x, aux.base, 1, p)
    for kr, mr in zip(k, m):
        top = a + kr * p
        factor = div_floor(
            monus(pow2(top), pow2(monus(top, q * monus(kr * p, mr)))),
            monus(pow2(kr * p), pow2(mr)),
        )
        product = mul(product, factor)
    return rm(div_floor(product, pow2(n * a)), pow2(p))


def _index_vectors(q: int, n: int):
    return itertools.product(range(q), repeat=n)


def swap_oracle(x: int, q: int, k: list[int], m: list[int]) -> int:
    out = 0
    for idx in _index_vectors(q, len(k)):
        src = sum(ki * i for ki, i in zip(k, idx))
        if (x >> src) & 1:
            out += 1 << sum(mi * i for mi, i in zip(m, idx))
    return out


def _check_swap(name: str, x: int, q: int, k: list[int], m: list[int]) -> None:
    n = len(k)
    if n < 1 or len(m) != n:
        raise DomainError(f"{name}: k and m must be non-empty and of equal length")
    _positive(name, q=q)
    if any(ki < 1 for ki in k) or any(mi < 0 for mi in m):
        raise DomainError(f"{name}: weights k must be >= 1 and m >= 0")
    check_iterations(name, q ** n)
    weights = {sum(ki * i for ki, i in zip(k, idx)) for idx in _index_vectors(q, n)}
    if len(weights) != q ** n:
        raise DomainError(f"{name}: weighted sums k·ī are not distinct over [0,{q})^{n}")
    support = 0
    for w in weights:
        support |= 1 << w
    if x & ~support:
        raise DomainError(f"{name}: x has bits outside the exponents k·ī")


def swap_n(x: int, q: int, k: list[int], m: list[int]) -> int:
    k, m = list(k), list(m)
    _check_swap("swap_n", x, q, k, m)
    return _dispatch("swap_n", _swap_cost(q, k, m),
                     lambda: swap_formula(x, q, k, m), lambda: swap_oracle(x, q, k, m))


# ---------------------------------------------------------------------------
# incr / decr: bit vector ⟨b;1⟩ ↔ ⟨b;l⟩
# ---------------------------------------------------------------------------

def incr_formula(x: int, q: int, l: int) -> int:
    return swap_formula(x, q, [1], [l])


def incr_oracle(x: int, q: int, l: int) -> int:
    return encode_blocks(_blocks(x, q, 1), l)


def decr_formula(x: int, q: int, l: int) -> int:
    return swap_formula(x, q, [l], [1])


def decr_oracle(x: int, q: int, l: int) -> int:
    return encode_blocks([b & 1 for b in _blocks(x, q, l)], 1)


def incr(x: int, q: int, l: int) -> int:
    _positive("incr", q=q, l=l)
    _fits("incr", x, q)
    return _dispatch("incr", _swap_cost(q, [1], [l]),
                     lambda: incr_formula(x, q, l), lambda: incr_oracle(x, q, l))


def decr(x: int, q: int, l: int) -> int:
    _positive("decr", q=q, l=l)
    _fits("decr", x, q * l)
    if x & ~rep_oracle(1, q, l):
        raise DomainError("decr: blocks must hold single bits")
    return _dispatch("decr", _swap_cost(q, [l], [1]),
                     lambda: decr_formula(x, q, l), lambda: decr_oracle(x, q, l))


# ---------------------------------------------------------------------------
# Bit-vector logic
# ---------------------------------------------------------------------------

def not_formula(x: int, n: int) -> int:
    return monus(monus(pow2(n), 1), x)


def or_formula(x: int, y: int, n: int) -> int:
    return not_formula(band(not_formula(x, n), not_formula(y, n)), n)


def xor_formula(x: int, y: int, n: int) -> int:
    return band(or_formula(x, y, n), not_formula(band(x, y), n))


_LOGIC_FORMULAS = {
    "not": lambda x, y, n: not_formula(x, n),
    "or": or_formula,
    "xor": xor_formula,
}

_LOGIC_ORACLES = {
    "not": lambda a, b: 1 - a,
    "or": lambda a, b: a | b,
    "xor": lambda a, b: a ^ b,
}


def bitlogic_oracle(x: int, y: int, n: int, op: str) -> int:
    fn = _LOGIC_ORACLES[op]
    return encode_blocks([fn(a, b) for a, b in zip(_blocks(x, n, 1), _blocks(y, n, 1))], 1)


def bitlogic(x: int, y: int, n: int, op: str) -> int:
    """Blockwise ¬x, x∨y or x⊕y on n-bit vectors (y is ignored for not)."""
    if op not in _LOGIC_FORMULAS:
        raise DomainError(f"bitlogic: op must be one of {sorted(_LOGIC_FORMULAS)}, got {op!r}")
    _positive("bitlogic", n=n)
    _fits("bitlogic", x, n)
    _fits("bitlogic", y, n)
    return _dispatch(f"bitlogic/{op}", n + 1,
                     lambda: _LOGIC_FORMULAS[op](x, y, n), lambda: bitlogic_oracle(x, y, n, op))


# ---------------------------------------------------------------------------
# cmp / cmpeq: blockwise comparison to a bit vector
# ---------------------------------------------------------------------------

def cmp_formula(x: int, y: int, n: int, l: int) -> int:
    top = pow2(2 * l - 1)
    marks = rep_formula(top, n, 2 * l)
    spread_x = incr_formula(x, n * l, 2)
    spread_y = incr_formula(y, n * l, 2)
    diff = monus(add(marks, spread_x), spread_y)
    return decr_formula(div_floor(band(diff, marks), top), n, 2 * l)


def cmp_oracle(x: int, y: int, n: int, l: int) -> int:
    return encode_blocks([int(a >= b) for a, b in zip(_blocks(x, n, l), _blocks(y, n, l))], 1)


def cmpeq_formula(x: int, y: int, n: int, l: int) -> int:
    return band(cmp_formula(x, y, n, l), cmp_formula(y, x, n, l))


def cmpeq_oracle(x: int, y: int, n: int, l: int) -> int:
    return encode_blocks([int(a == b) for a, b in zip(_blocks(x, n, l), _blocks(y, n, l))], 1)


def _cmp_cost(n: int, l: int) -> int:
    return max(_swap_cost(n * l, [1], [2]), _swap_cost(n, [2 * l], [1]))


def cmp(x: int, y: int, n: int, l: int) -> int:
    """⟨[x₀≥y₀], …, [x_{n−1}≥y_{n−1}]; 1⟩."""
    _positive("cmp", n=n, l=l)
    _fits("cmp", x, n * l)
    _fits("cmp", y, n * l)
    return _dispatch("cmp", _cmp_cost(n, l),
                     lambda: cmp_formula(x, y, n, l), lambda: cmp_oracle(x, y, n, l))


def cmpeq(x: int, y: int, n: int, l: int) -> int:
    """⟨[x₀=y₀], …, [x_{n−1}=y_{n−1}]; 1⟩."""
    _positive("cmpeq", n=n, l=l)
    _fits("cmpeq", x, n * l)
    _fits("cmpeq", y, n * l)
    return _dispatch("cmpeq", _cmp_cost(n, l),
                     lambda: cmpeq_formula(x, y, n, l), lambda: cmpeq_oracle(x, y, n, l))


# ---------------------------------------------------------------------------
# sum_blocks: add each run of k single-bit blocks
# ---------------------------------------------------------------------------

def sum_formula(x: int, n: int, l: int, k: int) -> int:
    shift = pow2((k - 1) * l)
    mask = rep_formula(mul(monus(pow2(l), 1), shift), n, k * l)
    return div_floor(band(mul(x, _ones(k, l)), mask), shift)


def sum_oracle(x: int, n: int, l: int, k: int) -> int:
    blocks = _blocks(x, n * k, l)
    return encode_blocks([sum(blocks[i * k:(i + 1) * k]) for i in range(n)], k * l)


def sum_blocks(x: int, n: int, l: int, k: int) -> int:
    """⟨s₀,…,s_{n−1}; kl⟩ where sᵢ adds blocks ik … ik+k−1 of ⟨…; l⟩."""
    _positive("sum_blocks", n=n, l=l, k=k)
    if k >= 1 << l:
        raise DomainError(f"sum_blocks: group size {k} must be below 2^{l}")
    _fits("sum_blocks", x, n * k * l)
    if x & ~rep_oracle(1, n * k, l):
        raise DomainError("sum_blocks: blocks must hold single bits")
    return _dispatch("sum_blocks", 2 * n * k * l,
                     lambda: sum_formula(x, n, l, k), lambda: sum_oracle(x, n, l, k))


# ---------------------------------------------------------------------------
# reverse_bits
# ---------------------------------------------------------------------------

def reverse_formula(x: int, n: int) -> int:
    if n == 1:
        return x
    low = pow2(n - 1)
    mask = div_floor(monus(pow2(n * n - 1), low), monus(low, 1))
    return decr_formula(div_floor(band(rep_formula(x, n, n), mask), low), n, n - 1)


def reverse_oracle(x: int, n: int) -> int:
    return int(format(x, f"0{n}b")[::-1], 2)


def reverse_bits(x: int, n: int) -> int:
    """Reverse the n-bit notation of x; bit 0 is a₀."""
    _positive("reverse_bits", n=n)
    _fits("reverse_bits", x, n)
    cost = n * n + (_swap_cost(n, [n - 1], [1]) if n > 1 else 0)
    return _dispatch("reverse_bits", cost,
                     lambda: reverse_formula(x, n), lambda: reverse_oracle(x, n))


# ---------------------------------------------------------------------------
# ssqrt / pow2_log
# ---------------------------------------------------------------------------

def ssqrt(y: int) -> int:
    """ssqrt(2^{2x}) = 2^x; other arguments get whatever the formula yields."""
    f = exp_logsq(y)
    f4 = pow2(4 * (f.bit_length() - 1))
    y2 = mul(y, y)
    check_bits("ssqrt", f4.bit_length() + 3 * y.bit_length())
    a = div_floor(monus(f4, 1), monus(y2, 1))
    c = band(a, monus(f, 1))
    b = div_floor(monus(div_floor(f4, 2), 1), monus(div_floor(y2, 2), 1))
    d = band(div_floor(mul(mul(b, c), mul(y2, y)), mul(2, f)), monus(y, 1))
    return monus(y, d)


def pow2_log(x: int) -> int:
    """2^⌊log₂x⌋ (1 at x = 0) from exp_logsq and ssqrt."""
    ratio = div_floor(exp_logsq(2 * x), mul(2, exp_logsq(x)))
    return add(mul(ssqrt(ratio), sg(x)), monus(1, sg(x)))
