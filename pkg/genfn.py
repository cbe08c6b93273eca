"""
Correct predicates and their generating functions.

The generating function of an n-ary predicate ρ packs its truth table
over [0, y)ⁿ into one integer:

    f_ρ(y) = Σ χ_ρ(x₁,…,xₙ) · 2^(x₁ + x₂y + … + xₙyⁿ⁻¹)

genfn_bruteforce computes it cell by cell. The constructions below build
the generating function of a derived predicate from the generating
functions of its parts using only natcore / blockvec operations, which is
what makes a predicate "correct". Each has a brute-force counterpart
(the *_predicate helpers) that the tests compare against.

Exports:
  GenPredicate, Polynomial, GrowthBound
  Permute, SubstConst, IdentifyLast, AddDummy   — explicit transforms
  genfn_bruteforce(rho, y)
  gen_logic(a, b, y, n, op)
  gen_poly_cmp(p, q, y)
  gen_explicit(f, transform, y, n)
  gen_count(psi, poly, z)
  xs_extract(fpsi, bound, args)
  transformed_predicate / count_predicate / poly_cmp_predicate / bit_graph
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable

import sympy
from sympy.polys.polyerrors import BasePolynomialError

import blockvec
from errors import DomainError
from natcore import band, bit_get, div_floor, monus, mul, pow2, require_nat
from settings import check_bits, check_iterations

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Predicates and polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenPredicate:
    arity: int
    chi: Callable[..., int]
    name: str = "rho"

    def __call__(self, *xs: int) -> int:
        value = self.chi(*xs)
        if value not in (0, 1, True, False):
            raise DomainError(f"predicate {self.name} returned {value!r}, expected 0 or 1")
        return int(value)


_DEFAULT_VARS = ("x", "y", "z", "t", "u", "v", "w")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with non-negative integer coefficients in `arity` variables.

    terms maps exponent vectors to coefficients; absent vectors are zero.
    """

    arity: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        for exps, coeff in self.terms:
            if len(exps) != self.arity:
                raise DomainError(f"monomial {exps} does not match arity {self.arity}")
            require_nat(coeff, *exps)

    @classmethod
    def parse(cls, text: str, arity: int | None = None, variables: list[str] | None = None) -> "Polynomial":
        """Read "x*y + 3*x + 1" style text; variables default to x1..xn or x, y, z, …"""
        try:
            expr = sympy.sympify(text)
        except (sympy.SympifyError, TypeError) as exc:
            raise DomainError(f"cannot read polynomial {text!r}: {exc}") from exc
        names = sorted(str(s) for s in expr.free_symbols)
        if variables is None:
            if names and all(n.startswith("x") and n[1:].isdigit() for n in names):
                count = arity or max(int(n[1:]) for n in names)
                variables = [f"x{i}" for i in range(1, count + 1)]
            else:
                count = arity or max([_DEFAULT_VARS.index(n) + 1 for n in names if n in _DEFAULT_VARS] or [1])
                variables = list(_DEFAULT_VARS[:count])
        unknown = set(names) - set(variables)
        if unknown:
            raise DomainError(f"polynomial uses unknown variables {sorted(unknown)}")
        symbols = [sympy.Symbol(v) for v in variables]
        try:
            poly = sympy.Poly(expr, *symbols)
        except BasePolynomialError as exc:
            raise DomainError(f"{text!r} is not a polynomial in {', '.join(variables)}") from exc
        terms = []
        for exps, coeff in poly.terms():
            if not coeff.is_Integer or coeff < 0:
                raise DomainError(f"coefficients must be non-negative integers, got {coeff}")
            terms.append((tuple(int(e) for e in exps), int(coeff)))
        return cls(len(variables), tuple(sorted(terms)))

    @classmethod
    def variable(cls, index: int, arity: int) -> "Polynomial":
        exps = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, ((exps, 1),))

    @classmethod
    def constant(cls, value: int, arity: int) -> "Polynomial":
        return cls(arity, (((0,) * arity, value),) if value else ())

    def __call__(self, *xs: int) -> int:
        if len(xs) != self.arity:
            raise DomainError(f"polynomial of arity {self.arity} called with {len(xs)} arguments")
        return sum(c * math.prod(x ** e for x, e in zip(xs, exps)) for exps, c in self.terms)

    def lift(self, arity: int, positions: list[int]) -> "Polynomial":
        """Same polynomial with variable i moved to positions[i] among `arity` variables."""
        terms = []
        for exps, c in self.terms:
            wide = [0] * arity
            for i, e in enumerate(exps):
                wide[positions[i]] = e
            terms.append((tuple(wide), c))
        return Polynomial(arity, tuple(sorted(terms)))


@dataclass(frozen=True)
class GrowthBound:
    """Pⁿ: level 0 is a polynomial, level k+1 is 2 raised to level k."""

    level: int
    polynomial: Polynomial

    def evaluate(self, *xs: int) -> int:
        value = self.polynomial(*xs)
        for _ in range(self.level):
            value = pow2(value)
        return value


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def _cells(y: int, n: int):
    """Argument vectors in cell order: x₁ varies fastest."""
    for idx in itertools.product(range(y), repeat=n):
        yield idx[::-1]


def genfn_bruteforce(rho: GenPredicate, y: int) -> int:
    if y < 1:
        raise DomainError("genfn_bruteforce: y must be >= 1")
    cells = y ** rho.arity
    check_bits("genfn_bruteforce", cells)
    check_iterations("genfn_bruteforce", cells)
    return blockvec.encode_blocks([rho(*xs) for xs in _cells(y, rho.arity)], 1)


# ---------------------------------------------------------------------------
# Logic
# ---------------------------------------------------------------------------

def gen_logic(a: int, b: int, y: int, n: int, op: str) -> int:
    """Generating function of ¬ρ (op="not", b ignored) or ρ∧φ (op="and")."""
    if y < 1 or n < 1:
        raise DomainError("gen_logic: y and n must be >= 1")
    cells = y ** n
    check_bits("gen_logic", cells)
    if op == "not":
        return blockvec.bitlogic(a, 0, cells, "not")
    if op == "and":
        if a.bit_length() > cells or b.bit_length() > cells:
            raise DomainError("gen_logic: operands are not generating functions of the same arity")
        return band(a, b)
    raise DomainError(f"gen_logic: op must be 'not' or 'and', got {op!r}")


# ---------------------------------------------------------------------------
# Polynomial comparison
# ---------------------------------------------------------------------------

def power_sum(e: int, y: int, z: int) -> int:
    """Σ_{x<y} xᵉ·2^{xz}."""
    check_iterations("power_sum", y)
    return sum(mul(x ** e, pow2(x * z)) for x in range(y))


def poly_table(p: Polynomial, y: int, l: int) -> int:
    """⟨p(x̃) over [0,y)ⁿ; l⟩ as a sum of products of univariate power sums."""
    total = 0
    for exps, coeff in p.terms:
        term = coeff
        for i, e in enumerate(exps):
            term = mul(term, power_sum(e, y, l * y ** i))
        total += term
    return total


def gen_poly_cmp(p: Polynomial, q: Polynomial, y: int) -> int:
    """Generating function of p(x̃) ≥ q(x̃)."""
    if p.arity != q.arity:
        raise DomainError("gen_poly_cmp: polynomials differ in arity")
    if y < 1:
        raise DomainError("gen_poly_cmp: y must be >= 1")
    n = p.arity
    top = (y,) * n
    l = p(*top) + q(*top) + 1
    cells = y ** n
    check_bits("gen_poly_cmp", l * cells)
    return blockvec.cmp(poly_table(p, y, l), poly_table(q, y, l), cells, l)


def poly_cmp_predicate(p: Polynomial, q: Polynomial) -> GenPredicate:
    return GenPredicate(p.arity, lambda *xs: int(p(*xs) >= q(*xs)), "poly_cmp")


# ---------------------------------------------------------------------------
# Explicit transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Permute:
    """φ(x₀,…,x_{n−1}) = ψ(x_{order[0]}, …, x_{order[n−1]})."""
    order: tuple[int, ...]


@dataclass(frozen=True)
class SubstConst:
    """φ(x₁,…,x_{n−1}) = ψ(x₁,…,x_{n−1}, value)."""
    value: int


@dataclass(frozen=True)
class IdentifyLast:
    """φ(x₁,…,x_{n−1}) = ψ(x₁,…,x_{n−1}, x_{n−1})."""


@dataclass(frozen=True)
class AddDummy:
    """φ(x₁,…,xₙ, t) = ψ(x₁,…,xₙ)."""


Transform = Permute | SubstConst | IdentifyLast | AddDummy


def _permute(f: int, y: int, n: int, order: tuple[int, ...]) -> int:
    if sorted(order) != list(range(n)):
        raise DomainError(f"permute: {order} is not a permutation of 0..{n - 1}")
    if list(order) == list(range(n)):
        return f
    return blockvec.swap_n(f, y, [y ** r for r in range(n)], [y ** order[r] for r in range(n)])


def _subst_const(f: int, y: int, n: int, a: int) -> int:
    if n < 2:
        raise DomainError("subst_const needs a predicate of arity >= 2")
    if a >= y:
        raise DomainError(f"subst_const: constant {a} must be below y={y}")
    slab = y ** (n - 1)
    shift = pow2(a * slab)
    return div_floor(band(f, mul(monus(pow2(slab), 1), shift)), shift)


def _identify_last(f: int, y: int, n: int) -> int:
    if n < 2:
        raise DomainError("identify_last needs a predicate of arity >= 2")
    last, prev = Polynomial.variable(n - 1, n), Polynomial.variable(n - 2, n)
    equal = band(gen_poly_cmp(last, prev, y), gen_poly_cmp(prev, last, y))
    rho = band(f, equal)
    k = [y ** i for i in range(n - 2)] + [y ** (n - 2) + y ** (n - 1)]
    m = [y ** i for i in range(n - 1)]
    return blockvec.swap_n(rho, y, k, m)


def _add_dummy(f: int, y: int, n: int) -> int:
    return blockvec.rep(f, y, y ** n)


def gen_explicit(f: int, transform: Transform, y: int, n: int) -> int:
    """Generating function of the transformed predicate, from f = f_ψ(y), ψ of arity n."""
    if y < 1 or n < 1:
        raise DomainError("gen_explicit: y and n must be >= 1")
    check_bits("gen_explicit", y ** (n + 1))
    match transform:
        case Permute(order):
            return _permute(f, y, n, tuple(order))
        case SubstConst(value):
            return _subst_const(f, y, n, value)
        case IdentifyLast():
            return _identify_last(f, y, n)
        case AddDummy():
            return _add_dummy(f, y, n)
    raise DomainError(f"unknown transform {transform!r}")


def transformed_predicate(psi: GenPredicate, transform: Transform) -> GenPredicate:
    n = psi.arity
    match transform:
        case Permute(order):
            return GenPredicate(n, lambda *xs: psi(*(xs[i] for i in order)), f"{psi.name}∘perm")
        case SubstConst(value):
            return GenPredicate(n - 1, lambda *xs: psi(*xs, value), f"{psi.name}[{value}]")
        case IdentifyLast():
            return GenPredicate(n - 1, lambda *xs: psi(*xs, xs[-1]), f"{psi.name}[=]")
        case AddDummy():
            return GenPredicate(n + 1, lambda *xs: psi(*xs[:-1]), f"{psi.name}+dummy")
    raise DomainError(f"unknown transform {transform!r}")


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def count_predicate(psi: GenPredicate, poly: Polynomial) -> GenPredicate:
    """φ(x₁,…,xₙ, y) ≡ y = #{x < p(x₁,…,xₙ) : ψ(x, x₂,…,xₙ)}."""
    def chi(*xs):
        *args, y = xs
        return int(y == sum(psi(x, *args[1:]) for x in range(poly(*args))))
    return GenPredicate(poly.arity + 1, chi, f"count[{psi.name}]")


def gen_count(psi: GenPredicate, poly: Polynomial, z: int) -> int:
    """Generating function at z of count_predicate(psi, poly).

    Works on the grid q = p(z,…,z) + z + 1, where every count fits:
    the table of ρ(x, x₁,…,xₙ, y) ≡ ψ(x, x₂,…) ∧ x < p(x₁,…) is widened
    to q-bit cells, summed over x, compared with the y coordinate, cut
    back to [0, z) and re-weighted to base z.
    """
    n = poly.arity
    if psi.arity != n:
        raise DomainError("gen_count: psi and the bound polynomial must share arity")
    if z < 1:
        raise DomainError("gen_count: z must be >= 1")
    q = poly(*(z,) * n) + z + 1
    check_bits("gen_count", q ** (n + 2) * q * q)

    # ψ(x, x₂..xₙ) → ρ over (x, x₁, x₂..xₙ, y)
    f = genfn_bruteforce(psi, q)
    f = _add_dummy(f, q, n)
    f = _add_dummy(f, q, n + 1)
    order = (0, *range(2, n + 1), 1, n + 1)
    f = _permute(f, q, n + 2, order)
    below = gen_poly_cmp(Polynomial.variable(0, n + 2), poly.lift(n + 2, list(range(1, n + 1))), q)
    f = band(f, blockvec.bitlogic(below, 0, q ** (n + 2), "not"))

    widened = blockvec.incr(f, q ** (n + 2), q)
    u = blockvec.sum_blocks(widened, q ** (n + 1), q, q)
    slab = q ** n * q * q
    ys = sum(mul(y, pow2(y * slab)) for y in range(q))
    v = mul(ys, blockvec.rep(1, q ** n, q * q))
    hits = blockvec.cmpeq(u, v, q ** (n + 1), q * q)

    w = 1
    for j in range(n + 1):
        w = mul(w, sum(pow2(i * q ** j) for i in range(z)))
    hits = band(hits, w)
    return blockvec.swap_n(hits, z, [q ** j for j in range(n + 1)], [z ** j for j in range(n + 1)])


# ---------------------------------------------------------------------------
# Function extraction from a bit-graph predicate
# ---------------------------------------------------------------------------

def bit_graph(f: Callable[..., int], n: int, name: str = "f") -> GenPredicate:
    """ψ(x₁,…,xₙ, y) ≡ bit y of f(x₁,…,xₙ) is 1."""
    return GenPredicate(n + 1, lambda *xs: bit_get(f(*xs[:-1]), xs[-1]), f"bits[{name}]")


def xs_extract(fpsi: Callable[[int], int], bound: Polynomial, args: tuple[int, ...]) -> int:
    """f(args) = decr(⌊f_ψ(z)/2^{x₁+x₂z+…}⌋, t, zⁿ) for a bit-graph predicate ψ.

    t = bound(args) must satisfy f(args) < 2^t. z is Σargs + 1, raised to t
    when t is larger so that every bit row y < t is inside the grid.
    """
    require_nat(*args)
    n = len(args)
    t = bound(*args)
    z = max(sum(args) + 1, t)
    if t == 0:
        return 0
    check_bits("xs_extract", z ** (n + 1))
    offset = sum(x * z ** i for i, x in enumerate(args))
    shifted = div_floor(fpsi(z), pow2(offset))
    rows = band(shifted, blockvec.rep(1, t, z ** n))
    return blockvec.decr(rows, t, z ** n)
