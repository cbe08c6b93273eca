"""
Permutations of ℕ₀ given by a forward and a backward evaluator, and the
constructions that generate a whole permutation group from a handful of
fixed permutations.

Pairing is bit interleaving: c2(x, y) puts the bits of x on the even
positions and the bits of y on the odd ones; c3(x, y, z) = c2(x, c2(y, z)).
Equality of permutations is tested pointwise on a prefix [0, N).

Exports:
  Perm, identity, matching, from_pairs, from_mapping, compose, power
  c2, c2_inv, c3, c3_inv
  make_pf(f)                          — the four-rule permutation p_f
  code_of(g), px, del_layer, s, move, place, swap1, swap2
  delete_combinator(f1, f2, in_a) / delete_odd(code)
  unar_compose_code(fs)
  even_matching_pipeline(f, word)
  RegularSet, naturals, residues, split, union, IntervalSet, fp_band_h,
  bounded_band_h, band_factory
  stationary_decompose(f, a, b)
  CorrectTriple, check_triple, stationary_to_triples(f, a, complement) → [(matching, triple)]
  three_to_two(f, a, b, c) / sequence_split(f, parts)
  megadelete(tuples, extra1, extra2)
  BandPartition, Assembly, two_generator_assembly(triples), rolall_word, word_perm
  check_bijective / check_involution / check_equal / check_stationary

Usage:
    p = make_pf(lambda x: x + 1)
    check_bijective(p, 4096)
    s(0, 1)(8)                     # 9
"""

import functools
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from errors import DomainError, VerificationError
from natcore import log2_floor, pow2, rm
from settings import check_bits, check_iterations, current

logger = logging.getLogger(__name__)

Unary = Callable[[int], int]


# ---------------------------------------------------------------------------
# Perm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Perm:
    fwd: Unary
    bwd: Unary
    name: str = "perm"
    support: int | None = None  # fwd(x) = x for x >= support

    def __call__(self, x: int) -> int:
        return self.fwd(x)

    @property
    def inverse(self) -> "Perm":
        return Perm(self.bwd, self.fwd, f"{self.name}^-1", self.support)

    @property
    def is_matching(self) -> bool:
        return self.fwd is self.bwd


def _id(x: int) -> int:
    return x


identity = Perm(_id, _id, "id", 0)


def matching(fn: Unary, name: str = "matching", support: int | None = None) -> Perm:
    """A permutation equal to its own inverse."""
    return Perm(fn, fn, name, support)


def from_mapping(mapping: dict[int, int], name: str = "finite") -> Perm:
    """Finitely supported permutation; unlisted points are fixed."""
    if sorted(mapping) != sorted(mapping.values()):
        raise DomainError(f"{name}: mapping is not a permutation of its keys")
    back = {v: k for k, v in mapping.items()}
    moved = [k for k, v in mapping.items() if k != v]
    return Perm(lambda x: mapping.get(x, x), lambda x: back.get(x, x), name,
                max(moved, default=-1) + 1)


def from_pairs(pairs: Iterable[tuple[int, int]], name: str = "pairs") -> Perm:
    """Matching swapping each pair; pairs must be disjoint."""
    table: dict[int, int] = {}
    for a, b in pairs:
        if a in table or b in table or a == b:
            raise DomainError(f"{name}: pairs must be disjoint, got a repeat at {a} / {b}")
        table[a], table[b] = b, a
    return matching(lambda x: table.get(x, x), name, max(table, default=-1) + 1)


def compose(*perms: Perm) -> Perm:
    """compose(f, g, h)(x) = f(g(h(x)))."""
    if not perms:
        return identity
    if len(perms) == 1:
        return perms[0]
    fwds = [p.fwd for p in reversed(perms)]
    bwds = [p.bwd for p in perms]

    def fwd(x: int) -> int:
        for fn in fwds:
            x = fn(x)
        return x

    def bwd(x: int) -> int:
        for fn in bwds:
            x = fn(x)
        return x

    supports = [p.support for p in perms]
    support = None if None in supports else max(supports)
    return Perm(fwd, bwd, "∘".join(p.name for p in perms), support)


def power(f: Perm, z: int) -> Perm:
    """f^z; f^0 is the identity and negative powers use the inverse."""
    if z == 0:
        return identity
    base = f if z > 0 else f.inverse
    return compose(*([base] * abs(z)))


def conjugate(p: Perm, f: Perm) -> Perm:
    """p ∘ f ∘ p⁻¹."""
    return compose(p, f, p.inverse)


# ---------------------------------------------------------------------------
# Prefix checks
# ---------------------------------------------------------------------------

def _prefix(n: int | None) -> int:
    return current().prefix if n is None else n


def check_bijective(p: Perm, n: int | None = None) -> None:
    for x in range(_prefix(n)):
        y = p.fwd(x)
        if p.bwd(y) != x:
            raise VerificationError(f"{p.name}: bwd(fwd(x)) = x", x, x, p.bwd(y))
        if p.fwd(p.bwd(x)) != x:
            raise VerificationError(f"{p.name}: fwd(bwd(x)) = x", x, x, p.fwd(p.bwd(x)))


def check_involution(p: Perm, n: int | None = None) -> None:
    for x in range(_prefix(n)):
        if p.fwd(p.fwd(x)) != x:
            raise VerificationError(f"{p.name}: involution", x, x, p.fwd(p.fwd(x)))


def check_equal(p: Perm, q: Perm, n: int | None = None, points: Iterable[int] | None = None) -> None:
    for x in (range(_prefix(n)) if points is None else points):
        if p.fwd(x) != q.fwd(x):
            raise VerificationError(f"{p.name} = {q.name}", x, q.fwd(x), p.fwd(x))


def check_stationary(p: Perm, where: Callable[[int], bool], n: int | None = None) -> None:
    for x in range(_prefix(n)):
        if where(x) and p.fwd(x) != x:
            raise VerificationError(f"{p.name}: stationary", x, x, p.fwd(x))


# ---------------------------------------------------------------------------
# Pairing by bit interleaving
# ---------------------------------------------------------------------------

def c2(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise DomainError("c2 takes non-negative arguments")
    if not x and not y:
        return 0
    width = max(x.bit_length(), y.bit_length())
    bx, by = format(x, f"0{width}b"), format(y, f"0{width}b")
    return int("".join(b + a for a, b in zip(bx, by)), 2)


def c2_inv(z: int) -> tuple[int, int]:
    if z == 0:
        return 0, 0
    bits = format(z, "b")
    if len(bits) % 2:
        bits = "0" + bits
    return int(bits[1::2], 2), int(bits[0::2], 2)


def c21(z: int) -> int:
    return c2_inv(z)[0]


def c22(z: int) -> int:
    return c2_inv(z)[1]


def c3(x: int, y: int, z: int) -> int:
    return c2(x, c2(y, z))


def c3_inv(w: int) -> tuple[int, int, int]:
    x, rest = c2_inv(w)
    y, z = c2_inv(rest)
    return x, y, z


# ---------------------------------------------------------------------------
# p_f
# ---------------------------------------------------------------------------

def make_pf(f: Unary, name: str = "f") -> Perm:
    """
    p_f:  c3(x, 2y, z)   → c3(f(x), 2·c2(x, y), z)
          c3(x, 4y+1, z) → c3(x, 2y+1, z)
          c3(x, 4y+3, z) → c3(x, 2y, z)      when x < f(c21(y))
          c3(x, 4y+3, z) → c3(x+1, 2y, z)    when x ≥ f(c21(y))

    The inverse reads the target's class: odd middle coordinate, or even
    middle 2y with first coordinate equal to, below or above f(c21(y)).
    """
    def fwd(w: int) -> int:
        x, v, z = c3_inv(w)
        if v % 2 == 0:
            return c3(f(x), 2 * c2(x, v // 2), z)
        y = v // 4
        if v % 4 == 1:
            return c3(x, 2 * y + 1, z)
        if x < f(c21(y)):
            return c3(x, 2 * y, z)
        return c3(x + 1, 2 * y, z)

    def bwd(w: int) -> int:
        u, v, z = c3_inv(w)
        if v % 2:
            return c3(u, 4 * (v // 2) + 1, z)
        y = v // 2
        a = f(c21(y))
        if u == a:
            x, y0 = c2_inv(y)
            return c3(x, 2 * y0, z)
        if u < a:
            return c3(u, 4 * y + 3, z)
        return c3(u - 1, 4 * y + 3, z)

    return Perm(fwd, bwd, f"p_{name}")


# ---------------------------------------------------------------------------
# Codes of binary functions and the fixed permutations
# ---------------------------------------------------------------------------

def code_of(g: Callable[[int, int], int | None], name: str = "g") -> Perm:
    """Matching c3(x, y, 0) ↔ c3(x, y, g(x, y) + 2) where g is defined (not None)."""
    def fn(w: int) -> int:
        x, y, z = c3_inv(w)
        if z == 1:
            return w
        value = g(x, y)
        if value is None:
            return w
        if z == 0:
            return c3(x, y, value + 2)
        return c3(x, y, 0) if value + 2 == z else w

    return matching(fn, f"code_{name}")


@functools.cache
def px() -> Perm:
    return code_of(lambda x, y: x, "x1")


@functools.cache
def del_layer() -> Perm:
    """c3(x, 2y, 0) ↔ c3(x, 2y, 1)."""
    def fn(w: int) -> int:
        x, y, z = c3_inv(w)
        if y % 2 or z > 1:
            return w
        return c3(x, y, 1 - z)

    return matching(fn, "del")


@functools.cache
def s(i: int, j: int) -> Perm:
    """4x + i ↔ 4x + j."""
    if not 0 <= i < j <= 3:
        raise DomainError(f"s_ij needs 0 <= i < j <= 3, got {i}, {j}")

    def fn(w: int) -> int:
        r = w % 4
        if r == i:
            return w - i + j
        if r == j:
            return w - j + i
        return w

    return matching(fn, f"s{i}{j}")


@functools.cache
def move() -> Perm:
    """On layer z = 0: even y moves up by 2, 1 goes to 0, odd y ≥ 3 moves down by 2."""
    def fwd(w: int) -> int:
        x, y, z = c3_inv(w)
        if z:
            return w
        if y % 2 == 0:
            return c3(x, y + 2, 0)
        return c3(x, 0 if y == 1 else y - 2, 0)

    def bwd(w: int) -> int:
        x, y, z = c3_inv(w)
        if z:
            return w
        if y % 2:
            return c3(x, y + 2, 0)
        return c3(x, 1 if y == 0 else y - 2, 0)

    return Perm(fwd, bwd, "move")


@functools.cache
def place() -> Perm:
    """c3(x,0,0) → 2x, c3(x,y+1,0) → 4c2(x,y)+1, c3(x,y,z+1) → 4c3(x,y,z)+3."""
    def fwd(w: int) -> int:
        x, y, z = c3_inv(w)
        if z:
            return 4 * c3(x, y, z - 1) + 3
        if y:
            return 4 * c2(x, y - 1) + 1
        return 2 * x

    def bwd(w: int) -> int:
        if w % 2 == 0:
            return c3(w // 2, 0, 0)
        if w % 4 == 1:
            x, y = c2_inv(w // 4)
            return c3(x, y + 1, 0)
        x, y, z = c3_inv(w // 4)
        return c3(x, y, z + 1)

    return Perm(fwd, bwd, "place")


def _swap(even_rule, even_back, name: str) -> Perm:
    """Shared shape of swap1 / swap2 on layers z ≥ 2; other points are fixed."""
    def fwd(w: int) -> int:
        x, y, z = c3_inv(w)
        if z < 2:
            return w
        if y % 2 == 0:
            return even_rule(x, y, z)
        if x >= 2:
            return c3(x - 2, y, z)
        return c3(x, y - 1, z)

    def bwd(w: int) -> int:
        x, y, z = c3_inv(w)
        if z < 2:
            return w
        if y % 2:
            return c3(x + 2, y, z)
        if x >= 2:
            return even_back(x, y, z)
        return c3(x, y + 1, z)

    return Perm(fwd, bwd, name)


@functools.cache
def swap1() -> Perm:
    return _swap(lambda x, y, z: c3(x + 2, y, z), lambda x, y, z: c3(x - 2, y, z), "swap1")


@functools.cache
def swap2() -> Perm:
    return _swap(lambda x, y, z: c3(z, y, x + 2), lambda x, y, z: c3(z - 2, y, x), "swap2")


# ---------------------------------------------------------------------------
# Delete combinator and codes of compositions
# ---------------------------------------------------------------------------

def delete_combinator(
    f1: Perm, f2: Perm, in_a: Callable[[int], bool], n: int | None = None
) -> Perm:
    """(f1 ∘ f2)⁴ ∘ f2, which is x ↔ f1(x) on A.

    Preconditions are sampled on [0, n): A, f1(A), f2(A) pairwise
    disjoint, f1 fixed on f2(A), f2 fixed off A ∪ f2(A).
    """
    members = [x for x in range(_prefix(n)) if in_a(x)]
    images2 = {f2(a): a for a in members}
    for a in members:
        if in_a(f1(a)) or in_a(f2(a)) or f1(a) in images2:
            raise VerificationError("delete: A, f1(A), f2(A) pairwise disjoint", a)
        if f1(f2(a)) != f2(a):
            raise VerificationError("delete: f1 stationary on f2(A)", f2(a), f2(a), f1(f2(a)))
    for x in range(_prefix(n)):
        if not in_a(x) and x not in images2 and f2(x) != x:
            raise VerificationError("delete: f2 stationary off A ∪ f2(A)", x, x, f2(x))
    return compose(power(compose(f1, f2), 4), f2)


def delete_odd(code: Perm) -> Perm:
    """(code ∘ del)⁴ ∘ del: the code of g restricted to even second arguments."""
    return compose(power(compose(code, del_layer()), 4), del_layer())


def unar_compose_code(fs: Sequence[Unary]) -> Perm:
    """p_{fₙ}⁻¹ ∘ … ∘ p_{f₁}⁻¹ ∘ px ∘ p_{f₁} ∘ … ∘ p_{fₙ}: code of g with g(x, 2y) = f₁∘…∘fₙ(x)."""
    if not fs:
        raise DomainError("unar_compose_code needs at least one function")
    ps = [make_pf(f, getattr(f, "name", f"f{i}")) for i, f in enumerate(fs, 1)]
    return compose(*[p.inverse for p in reversed(ps)], px(), *ps)


def even_matching_pipeline(f: Perm, word: Sequence[Unary], n: int | None = None) -> Perm:
    """place ∘ ψ₆ ∘ place⁻¹ for a matching f over the even numbers.

    word is r₁ … r_k with f′ = r₁ ∘ … ∘ r_k, f′(x) = f(2x)/2. The result is
    compared with f on [0, n).
    """
    if word:
        psi = unar_compose_code(word)
    else:
        psi = px()
    psi1 = delete_odd(psi)
    psi2 = conjugate(swap1(), psi1)
    psi3 = conjugate(swap2(), psi1)
    psi4 = compose(psi3, psi2)
    psi5 = conjugate(move(), psi4)
    psi6 = compose(psi5, psi4)
    result = conjugate(place(), psi6)
    check_equal(result, f, n)
    return Perm(result.fwd, result.bwd, f"pipeline({f.name})", f.support)


# ---------------------------------------------------------------------------
# Regular sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularSet:
    """An infinite set with its membership test, rank μ and unrank ν."""

    chi: Callable[[int], int]
    mu: Unary
    nu: Unary
    name: str = "A"

    def __contains__(self, x: int) -> bool:
        return bool(self.chi(x))


def naturals() -> RegularSet:
    return RegularSet(lambda x: 1, _id, _id, "N")


def residues(modulus: int, r: int) -> RegularSet:
    """{modulus·k + r}."""
    if not 0 <= r < modulus:
        raise DomainError(f"residue {r} outside 0..{modulus - 1}")
    return RegularSet(
        lambda x: int(x % modulus == r),
        lambda x: x // modulus if x % modulus == r else 0,
        lambda k: modulus * k + r,
        f"{modulus}N+{r}",
    )


def split(a: RegularSet) -> tuple[RegularSet, RegularSet]:
    """Members of even and of odd rank."""
    def part(i: int) -> RegularSet:
        def chi(x: int) -> int:
            return int(x in a and a.mu(x) % 2 == i)

        return RegularSet(chi, lambda x: (a.mu(x) - i) // 2 if chi(x) else 0,
                          lambda k: a.nu(2 * k + i), f"{a.name}/{i}")

    return part(0), part(1)


def union(a: RegularSet, b: RegularSet) -> RegularSet:
    """A ∪ B for disjoint A, B; ranks interleave A's (even) and B's (odd)."""
    def mu(x: int) -> int:
        if x in a:
            return 2 * a.mu(x)
        if x in b:
            return 2 * b.mu(x) + 1
        return 0

    return RegularSet(lambda x: int(x in a or x in b), mu,
                      lambda k: a.nu(k // 2) if k % 2 == 0 else b.nu(k // 2),
                      f"{a.name}∪{b.name}")


class IntervalSet:
    """Union of the intervals [hⁱ(0), hⁱ⁺¹(0)) whose index i mod 4 is in `residues`."""

    def __init__(self, h: Unary, residues: Iterable[int], name: str = "R"):
        self.h = h
        self.residues = frozenset(residues)
        self.name = name
        self._bounds = [0]

    def _bound(self, i: int) -> int:
        while len(self._bounds) <= i:
            nxt = self.h(self._bounds[-1])
            check_bits(f"{self.name} interval bound", nxt.bit_length())
            self._bounds.append(nxt)
        return self._bounds[i]

    def interval(self, x: int) -> int:
        i = 0
        while self._bound(i + 1) <= x:
            i += 1
        return i

    def chi(self, x: int) -> int:
        return int(self.interval(x) % 4 in self.residues)

    def mu(self, x: int) -> int:
        i = self.interval(x)
        if i % 4 not in self.residues:
            return 0
        below = sum(self._bound(j + 1) - self._bound(j) for j in range(i) if j % 4 in self.residues)
        return below + x - self._bound(i)

    def nu(self, k: int) -> int:
        for j in itertools.count():
            if j % 4 not in self.residues:
                continue
            size = self._bound(j + 1) - self._bound(j)
            if k < size:
                return self._bound(j) + k
            k -= size

    def complement(self) -> "IntervalSet":
        return IntervalSet(self.h, set(range(4)) - self.residues, f"N\\{self.name}")

    def regular(self) -> RegularSet:
        return RegularSet(self.chi, self.mu, self.nu, self.name)


def fp_band_h(n: int = 2) -> Unary:
    """h(x) = 2^(⌊log₂(x+20)⌋ⁿ) + 2x."""
    if n < 2:
        raise DomainError("fp_band_h needs n >= 2")

    def h(x: int) -> int:
        return pow2(log2_floor(x + 20) ** n) + 2 * x

    return h


def bounded_band_h(f: Perm) -> Unary:
    """h(x) = max_{y≤x} max(f(y), f⁻¹(y)) + 2x + 1."""
    def h(x: int) -> int:
        top = x
        limit = x if f.support is None else min(x, f.support)
        check_iterations("bounded_band_h", limit)
        for y in range(limit + 1):
            top = max(top, f.fwd(y), f.bwd(y))
        return top + 2 * x + 1

    return h


def band_factory(h: Unary | int = 2) -> tuple[IntervalSet, IntervalSet]:
    """R1 = A₀ ∪ A₄ ∪ …, R2 = A₂ ∪ A₆ ∪ … over the intervals of h.

    An int selects the h of fp_band_h. When f, f⁻¹ < h pointwise,
    f(R1) ∩ R2 = ∅.
    """
    if isinstance(h, int):
        h = fp_band_h(h)
    return IntervalSet(h, {0}, "R1"), IntervalSet(h, {2}, "R2")


# ---------------------------------------------------------------------------
# Decomposition into stationary factors
# ---------------------------------------------------------------------------

def stationary_decompose(
    f: Perm, a: RegularSet, b: RegularSet, n: int | None = None
) -> tuple[Perm, Perm]:
    """f = f1 ∘ f2 with f2 fixed on A and f1 fixed on the odd-rank half of B.

    f1 agrees with f on A; each point of f(A) \\ A continues into an
    infinite chain through B's even-rank half, and each point of
    A \\ f(A) is fed by one.
    """
    for x in range(_prefix(n)):
        if x in a and x in b:
            raise VerificationError("stationary_decompose: A ∩ B = ∅", x)
        if x in a and f(x) in b:
            raise VerificationError("stationary_decompose: f(A) ∩ B = ∅", x, None, f(x))
    b1, _ = split(b)

    def sink(x: int) -> bool:
        return x not in a and f.bwd(x) in a

    def source(x: int) -> bool:
        return x in a and f.bwd(x) not in a

    def chain(x: int, y: int) -> int:
        return b1.nu(c2(x, y))

    def fwd(w: int) -> int:
        if w in a:
            return f(w)
        if sink(w):
            return chain(w, 0)
        if w in b1:
            x, y = c2_inv(b1.mu(w))
            if sink(x):
                return chain(x, y + 1)
            if source(x):
                return x if y == 0 else chain(x, y - 1)
        return w

    def bwd(w: int) -> int:
        if f.bwd(w) in a:
            return f.bwd(w)
        if source(w):
            return chain(w, 0)
        if w in b1:
            x, y = c2_inv(b1.mu(w))
            if sink(x):
                return x if y == 0 else chain(x, y - 1)
            if source(x):
                return chain(x, y + 1)
        return w

    f1 = Perm(fwd, bwd, f"{f.name}_1")
    return f1, compose(f1.inverse, f)


@dataclass(frozen=True)
class CorrectTriple:
    """(f, g, B): f swaps b₁↔b₃ and b₂↔b₄, g swaps b₁↔b₂, over all tuples of B.

    B is indexed: b_at(k) for k < size, or for every k when size is None.
    """

    f: Perm
    g: Perm
    b_at: Callable[[int], tuple[int, int, int, int]]
    size: int | None = None

    @classmethod
    def finite(cls, f: Perm, g: Perm, tuples: Sequence[tuple[int, int, int, int]]) -> "CorrectTriple":
        tuples = tuple(tuples)
        return cls(f, g, tuples.__getitem__, len(tuples))

    def tuples(self, count: int) -> list[tuple[int, int, int, int]]:
        if self.size is not None:
            count = min(count, self.size)
        return [self.b_at(k) for k in range(count)]


def check_triple(t: CorrectTriple, count: int = 256) -> None:
    seen: set[int] = set()
    for b in t.tuples(count):
        if len(set(b)) != 4 or seen & set(b):
            raise VerificationError("triple: components pairwise distinct", b)
        seen |= set(b)
        b1, b2, b3, b4 = b
        if (t.f(b1), t.f(b3), t.f(b2), t.f(b4)) != (b3, b1, b4, b2):
            raise VerificationError(f"triple: {t.f.name} swaps b1↔b3, b2↔b4", b)
        if (t.g(b1), t.g(b2)) != (b2, b1):
            raise VerificationError(f"triple: {t.g.name} swaps b1↔b2", b)


def stationary_to_triples(
    f: Perm, a: RegularSet, complement: RegularSet, n: int | None = None
) -> list[tuple[Perm, CorrectTriple]]:
    """Four (matching, triple) pairs with f = h2 ∘ h1 ∘ r1 ∘ r2 (returned in that order).

    Each matching is the f of its triple.

    f must be fixed on A; complement is ℕ₀ \\ A. With A split into A₁, A₂, A₃:
        c′(x, 0) = ν_C(x), c′(x, 1) = ν_A₁(x), c′(x, z>1) = ν_A₃(c2(x, z−2)),
        c′(x, z<0) = ν_A₂(c2(x, −z−1)),
        c″(x, z) = c′(x, z) for z ≤ 0 and c′(g(x), z) for z > 0, g = μ_C∘f∘ν_C.
    r₁, r₂ (built on c″) and h₁, h₂ (on c′) send z to 1−z and to −z.
    """
    check_stationary(f, lambda x: x in a, n)
    a1, rest = split(a)
    a2, a3 = split(rest)

    def c1(x: int, z: int) -> int:
        if z == 0:
            return complement.nu(x)
        if z == 1:
            return a1.nu(x)
        if z > 1:
            return a3.nu(c2(x, z - 2))
        return a2.nu(c2(x, -z - 1))

    def c1_inv(w: int) -> tuple[int, int]:
        if w in complement:
            return complement.mu(w), 0
        if w in a1:
            return a1.mu(w), 1
        if w in a3:
            x, j = c2_inv(a3.mu(w))
            return x, j + 2
        x, j = c2_inv(a2.mu(w))
        return x, -j - 1

    def g(x: int) -> int:
        return complement.mu(f(complement.nu(x)))

    def g_inv(x: int) -> int:
        return complement.mu(f.bwd(complement.nu(x)))

    def c11(x: int, z: int) -> int:
        return c1(x, z) if z <= 0 else c1(g(x), z)

    def c11_inv(w: int) -> tuple[int, int]:
        x, z = c1_inv(w)
        return (x, z) if z <= 0 else (g_inv(x), z)

    def reflect(enc, dec, shift: int, name: str) -> Perm:
        def fn(w: int) -> int:
            x, z = dec(w)
            return enc(x, shift - z)
        return matching(fn, name)

    r1 = reflect(c11, c11_inv, 1, "r1")
    r2 = reflect(c11, c11_inv, 0, "r2")
    h1 = reflect(c1, c1_inv, 1, "h1")
    h2 = reflect(c1, c1_inv, 0, "h2")

    def pairing(offset: int, name: str) -> Perm:
        def fn(w: int) -> int:
            x, z = c1_inv(w)
            if z > -offset:
                return w
            k = -z - offset
            return c1(x, z - 1) if k % 2 == 0 else c1(x, z + 1)
        return matching(fn, name)

    s1 = pairing(0, "s1")
    s2 = pairing(1, "s2")

    def tuples(enc, offset: int):
        def b_at(k: int) -> tuple[int, int, int, int]:
            x, y = c2_inv(k)
            return (enc(x, -2 * y - offset), enc(x, -2 * y - 1 - offset),
                    enc(x, 2 * y + 1), enc(x, 2 * y + 2))
        return b_at

    return [
        (h2, CorrectTriple(h2, s2, tuples(c1, 1))),
        (h1, CorrectTriple(h1, s1, tuples(c1, 0))),
        (r1, CorrectTriple(r1, s1, tuples(c11, 0))),
        (r2, CorrectTriple(r2, s2, tuples(c11, 1))),
    ]


# ---------------------------------------------------------------------------
# Matchings over unions of sets
# ---------------------------------------------------------------------------

def three_to_two(
    f: Perm, in_a: Callable[[int], bool], b: RegularSet, in_c: Callable[[int], bool]
) -> list[tuple[str, Perm]]:
    """f = f1 ∘ f2 ∘ g1 ∘ g2 ∘ g1 for a matching f over A ∪ B ∪ C.

    f1 and g1 are matchings over A ∪ B, f2 and g2 over B ∪ C. Each factor
    comes tagged "AB" or "BC".
    """
    def in_ab(x: int) -> bool:
        return in_a(x) or x in b

    def in_bc(x: int) -> bool:
        return x in b or in_c(x)

    def crossing(x: int) -> bool:
        return in_a(x) and in_c(f(x))

    def f1(x: int) -> int:
        return f(x) if in_ab(x) and in_ab(f(x)) else x

    def f2(x: int) -> int:
        if (in_c(x) and in_bc(f(x))) or (in_c(f(x)) and in_bc(x)):
            return f(x)
        return x

    def g1(x: int) -> int:
        if crossing(x):
            return b.nu(x)
        if x in b and crossing(b.mu(x)):
            return b.mu(x)
        return x

    def g2(x: int) -> int:
        if x in b and crossing(b.mu(x)):
            return f(b.mu(x))
        if in_c(x) and crossing(f(x)):
            return b.nu(f(x))
        return x

    gm1 = matching(g1, "g1")
    return [("AB", matching(f1, "f1")), ("BC", matching(f2, "f2")),
            ("AB", gm1), ("BC", matching(g2, "g2")), ("AB", gm1)]


def sequence_split(f: Perm, parts: Sequence[RegularSet]) -> list[tuple[int, Perm]]:
    """Matchings over Aᵢ ∪ Aᵢ₊₁ whose composition is the matching f over ∪ parts.

    Each factor is returned with the index i of its pair.
    """
    if len(parts) < 2:
        raise DomainError("sequence_split needs at least two parts")
    if len(parts) == 2:
        return [(0, f)]
    first, last = parts[0], parts[-1]
    middle = functools.reduce(union, parts[1:-1])
    out: list[tuple[int, Perm]] = []
    for tag, factor in three_to_two(f, first.__contains__, middle, last.__contains__):
        if tag == "AB":
            out.extend(sequence_split(factor, parts[:-1]))
        else:
            out.extend((i + 1, p) for i, p in sequence_split(factor, parts[1:]))
    return out


def megadelete(
    tuples: Sequence[tuple[int, int, int, int]], extra1: Perm = identity, extra2: Perm = identity
) -> tuple[Perm, Perm]:
    """f1 = (b₁↔b₂, b₃↔b₄) ∘ extra1, f2 = (b₁↔b₃) ∘ extra2; (f1 ∘ f2)² swaps b₁↔b₃, b₂↔b₄.

    extra1 and extra2 must be matchings over sets disjoint from the tuples
    and from each other.
    """
    f1 = from_pairs([p for b in tuples for p in ((b[0], b[1]), (b[2], b[3]))], "f1'")
    f2 = from_pairs([(b[0], b[2]) for b in tuples], "f2'")
    return compose(f1, extra1), compose(f2, extra2)


# ---------------------------------------------------------------------------
# Two generators: rol and all
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandPartition:
    """Bands Eᵢ = {M·x + i}, M = 2^(2n+1); rol moves Eᵢ onto Eᵢ₊₁ (mod M)."""

    n: int

    @property
    def modulus(self) -> int:
        return pow2(2 * self.n + 1)

    def band(self, i: int) -> RegularSet:
        return residues(self.modulus, i % self.modulus)

    def band_of(self, x: int) -> int:
        return rm(x, self.modulus)

    def rol_power(self, k: int) -> Perm:
        """rol^k(x) = x − rm(x, M) + rm(x + k, M)."""
        m = self.modulus
        k %= m

        def fwd(x: int) -> int:
            return x - x % m + (x % m + k) % m

        def bwd(x: int) -> int:
            return x - x % m + (x % m - k) % m

        return Perm(fwd, bwd, f"rol^{k}")

    @property
    def rol(self) -> Perm:
        return self.rol_power(1)

    @property
    def low_pair(self) -> RegularSet:
        return union(self.band(0), self.band(1))


def _h_pair(t: CorrectTriple) -> tuple[Unary, Unary]:
    """hᵢ: x ↔ g(x), f(x) ↔ f(g(x)); hᵢ₊ₙ: x ↔ f(x); both over x < g(x)."""
    f, g = t.f, t.g

    def h_swap(y: int) -> int:
        if g(y) != y:
            return g(y)
        u = f(y)
        if g(u) != u:
            return f(g(u))
        return y

    def h_cross(y: int) -> int:
        if y < g(y):
            return f(y)
        u = f(y)
        if u < g(u):
            return u
        return y

    return h_swap, h_cross


@dataclass(frozen=True)
class Assembly:
    bands: BandPartition
    rol: Perm
    all: Perm
    w_direct: list[Perm] = field(default_factory=list)
    w_generated: list[Perm] = field(default_factory=list)


def _transport(bands: BandPartition, h: Unary, name: str) -> Perm:
    """ν(x) → ν(h(x)) on E₀ ∪ E₁, identity elsewhere; h must be a matching."""
    low = bands.low_pair

    def fn(w: int) -> int:
        if w in low:
            return low.nu(h(low.mu(w)))
        return w

    return matching(fn, name)


def two_generator_assembly(
    triples: Sequence[CorrectTriple], n: int | None = None, points: Iterable[int] | None = None
) -> Assembly:
    """rol, all and every wᵢ computed directly and as (s₁ ∘ s₂)².

    The two computations of each wᵢ are compared on [0, M·64), on [0, n)
    or on the given points.
    """
    if not triples:
        raise DomainError("two_generator_assembly needs at least one triple")
    k = len(triples)
    bands = BandPartition(k)
    hs = [_h_pair(t) for t in triples]
    h_all = [h[0] for h in hs] + [h[1] for h in hs]
    vs = []
    for i, h in enumerate(h_all, 1):
        u = _transport(bands, h, f"u{i}")
        vs.append(conjugate(bands.rol_power(pow2(i)), u))
    all_perm = compose(*vs)
    all_perm = matching(all_perm.fwd, "all")

    w_direct = [_transport(bands, t.f.fwd, f"w{i}") for i, t in enumerate(triples, 1)]
    w_generated = [word_perm(rolall_word(i, k), bands, all_perm) for i in range(1, k + 1)]
    limit = bands.modulus * 64 if n is None else n
    points = None if points is None else list(points)
    for wd, wg in zip(w_direct, w_generated):
        check_equal(wg, wd, limit, points)
    logger.debug("%d rol/all words checked against their direct w", k)
    return Assembly(bands, bands.rol, all_perm, w_direct, w_generated)


def rolall_word(i: int, n: int) -> list[tuple[str, int]]:
    """wᵢ = (s₁ ∘ s₂)² with s₁ = rol^(−2ⁱ) ∘ all ∘ rol^(2ⁱ), s₂ the same with 2^(i+n)."""
    m = pow2(2 * n + 1)
    a, b = pow2(i), pow2(i + n)
    s1 = [("rol", m - a), ("all", 1), ("rol", a)]
    s2 = [("rol", m - b), ("all", 1), ("rol", b)]
    return (s1 + s2) * 2


def word_perm(word: Sequence[tuple[str, int]], bands: BandPartition, all_perm: Perm) -> Perm:
    """Compose a word of ("rol", k) / ("all", 1) letters, leftmost outermost."""
    letters = []
    for letter, k in word:
        if letter == "rol":
            letters.append(bands.rol_power(k))
        elif letter == "all":
            letters.append(power(all_perm, k))
        else:
            raise DomainError(f"unknown letter {letter!r}")
    return compose(*letters)
