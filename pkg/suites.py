"""
Property suites: every closed construction against its brute-force oracle.

Each suite takes a seeded random.Random and returns the number of checks
it made; a disagreement raises VerificationError carrying the first
counterexample. run_suites() wraps them into SuiteReports for the CLI.

Exports:
  SuiteReport
  SUITES                     — name → suite function
  PERM_SUITES                — names accepted by `perm verify --suite`
  run_suite(name, seed, **options) → SuiteReport
  run_suites(names, seed, **options) → list[SuiteReport]
  GEN_CORPUS / FUNCTION_CORPUS / FOM_CORPUS / MACHINE_BOXES

Usage:
    from suites import run_suites, SUITES
    for report in run_suites(list(SUITES), seed=7):
        print(report.line())
"""

import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path

import blockvec
import fomlogic
import formula
import genfn
import minskyq
import permgroup as pg
from errors import BudgetError, RecfunError, VerificationError
from natcore import bit_get, monus, rm
from settings import current

logger = logging.getLogger(__name__)

MODEL_DIR = Path(__file__).parent
DATA_DIR = MODEL_DIR / "data"
MACHINES_DIR = DATA_DIR / "machines"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failure: str | None = None
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def line(self) -> str:
        if self.ok:
            return f"{self.name}: ok ({self.checks} checks)"
        return f"{self.name}: FAILED {self.failure}"

    def to_json(self) -> dict:
        out = {"suite": self.name, "ok": self.ok, "checks": str(self.checks)}
        if not self.ok:
            out["failure"] = self.failure
            out["counterexample"] = self.counterexample
        return out


def _expect(check: str, counterexample, expected, actual) -> None:
    if expected != actual:
        raise VerificationError(check, counterexample, expected, actual)


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------

GEN_CORPUS: dict[str, genfn.GenPredicate] = {
    "even": genfn.GenPredicate(1, lambda x: int(x % 2 == 0), "even"),
    "lt": genfn.GenPredicate(2, lambda x, y: int(x < y), "lt"),
    "eq": genfn.GenPredicate(2, lambda x, y: int(x == y), "eq"),
    "bit": genfn.GenPredicate(2, bit_get, "bit"),
    "sum_eq": genfn.GenPredicate(3, lambda x, y, z: int(x + y == z), "sum_eq"),
    "between": genfn.GenPredicate(3, lambda x, y, z: int(x <= y < z), "between"),
}

# (p, q, arity) for the p >= q tables
POLY_PAIRS: tuple[tuple[str, str, int], ...] = (
    ("x**2", "2*x + 1", 1),
    ("x*y + 1", "x + y", 2),
    ("2*x", "y + 1", 2),
    ("x*y", "z + 1", 3),
)

# predicate → count bound; the bound shares the predicate's arity
COUNT_BOUNDS: dict[str, str] = {
    "even": "x + 1",
    "lt": "x + 1",
    "bit": "y",
    "sum_eq": "x1",
}

# name → (function, arity, bound polynomial with f < 2^bound)
FUNCTION_CORPUS: dict[str, tuple] = {
    "identity": (lambda x: x, 1, "x + 1"),
    "monus": (monus, 2, "x + 1"),
    "bit": (bit_get, 2, "1"),
    "rm3": (lambda x: rm(x, 3), 1, "2"),
}

FOM_CORPUS: tuple[tuple[str, int], ...] = (
    ("(leq y1 y2)", 2),
    ("(bit len y1)", 1),
    ("(bit y2 y1)", 2),
    ("(wbit y1)", 1),
    ("(wbit len)", 0),
    ("(and (wbit y1) (not (leq y1 1)))", 1),
    ("(or (wbit 1) (leq len y1))", 1),
    ("(E y1 (wbit y1))", 0),
    ("(A y1 (wbit y1))", 0),
    ("(M y1 (wbit y1))", 0),
    ("(E y2 (and (leq y1 y2) (not (leq y2 y1))))", 1),
    ("(M y2 (and (leq y2 y1) (wbit y2)))", 1),
)

# machine file → (time polynomial, input box per tape)
MACHINE_BOXES: dict[str, tuple[str, tuple[int, ...]]] = {
    "inc.mm": ("x + 2", (10,)),
    "ident.mm": ("x + 2", (10,)),
    "adder.mm": ("x + y + 2", (10, 10)),
}


def _words(max_len: int):
    for n in range(1, max_len + 1):
        for v in range(2 ** n):
            yield format(v, f"0{n}b")


def _assignments(m: int, n: int):
    if m == 0:
        yield ()
        return
    for rest in _assignments(m - 1, n):
        for y in range(1, n + 1):
            yield rest + (y,)


# ---------------------------------------------------------------------------
# natcore / formula
# ---------------------------------------------------------------------------

def suite_binomial(rng: random.Random, *, max_x: int = 40, **_) -> int:
    f = formula.binomial_formula()
    checks = 0
    for x in range(max_x + 1):
        for y in range(x + 1):
            _expect("binomial formula", (x, y), math.comb(x, y), formula.evaluate(f, {"x": x, "y": y}))
            checks += 1
    return checks


def suite_heights(rng: random.Random, **_) -> int:
    cases = [
        ("add(mul(x, pow2(add(x, mul(y, z)))), pow2(t))", "exp2", 2),
        ("pow2(pow2(x))", "exp2", 3),
        ("powvar(x, y)", "powxy", 2),
    ]
    for text, tower, height in cases:
        _expect("exp height", text, height, formula.exp_height(formula.parse(text), tower).height)
    return len(cases)


# ---------------------------------------------------------------------------
# blockvec
# ---------------------------------------------------------------------------

def _random_blocks(rng: random.Random, n: int, l: int) -> int:
    return blockvec.encode_blocks([rng.randrange(2 ** l) for _ in range(n)], l)


def _swap_instance(rng: random.Random) -> tuple[int, list[int], list[int], int]:
    """A random swap_n instance in up to three dimensions: q, k, m and x over the exponents k·ī."""
    dims = rng.randint(1, 3)
    q = rng.randint(1, 4) if dims == 1 else rng.randint(2, 4) if dims == 2 else 2
    weights = [q ** j for j in range(dims)]
    targets = [rng.randint(1, 3)]
    for _ in range(dims - 1):
        # mixed radix keeps the images m·ī distinct
        targets.append((q - 1) * sum(targets) + 1 + rng.randint(0, 2))
    spread = rng.randrange(2 ** q ** dims)
    src = 0
    for i in range(q ** dims):
        if spread >> i & 1:
            idx = [i // q ** r % q for r in range(dims)]
            src |= 1 << sum(w * j for w, j in zip(weights, idx))
    return q, weights, targets, src


def suite_blockvec(rng: random.Random, *, count: int = 10_000, **_) -> int:
    """Formula path against the decode/transform/encode oracle on random valid instances."""
    checks = 0
    for _ in range(count):
        n, l = rng.randint(1, 6), rng.randint(1, 5)
        x, y = _random_blocks(rng, n, l), _random_blocks(rng, n, l)
        bits = rng.randrange(2 ** n)
        xb, yb = rng.randrange(2 ** n), rng.randrange(2 ** n)
        k = rng.randint(1, 2 ** l - 1) if l < 3 else rng.randint(1, 4)
        ones = blockvec.encode_blocks([rng.randint(0, 1) for _ in range(n * k)], l)
        width = rng.randint(1, 4)
        cases = {
            "rep": (blockvec.rep_formula(x, n, l), blockvec.rep_oracle(x, n, l)),
            "incrx": (blockvec.incrx_formula(x, n, l, (n + 1) * l), blockvec.incrx_oracle(x, n, l, (n + 1) * l)),
            "incr": (blockvec.incr_formula(bits, n, width), blockvec.incr_oracle(bits, n, width)),
            "decr": (blockvec.decr_formula(blockvec.incr_oracle(bits, n, width), n, width),
                     blockvec.decr_oracle(blockvec.incr_oracle(bits, n, width), n, width)),
            "not": (blockvec.not_formula(xb, n), blockvec.bitlogic_oracle(xb, 0, n, "not")),
            "or": (blockvec.or_formula(xb, yb, n), blockvec.bitlogic_oracle(xb, yb, n, "or")),
            "xor": (blockvec.xor_formula(xb, yb, n), blockvec.bitlogic_oracle(xb, yb, n, "xor")),
            "cmp": (blockvec.cmp_formula(x, y, n, l), blockvec.cmp_oracle(x, y, n, l)),
            "cmpeq": (blockvec.cmpeq_formula(x, y, n, l), blockvec.cmpeq_oracle(x, y, n, l)),
            "sum": (blockvec.sum_formula(ones, n, l, k), blockvec.sum_oracle(ones, n, l, k)),
            "reverse": (blockvec.reverse_formula(bits, n), blockvec.reverse_oracle(bits, n)),
        }
        q, weights, targets, src = _swap_instance(rng)
        for name, (got, want) in cases.items():
            _expect(f"blockvec {name}", (x, y, n, l), want, got)
        _expect("blockvec swap", (src, q, weights, targets),
                blockvec.swap_oracle(src, q, weights, targets), blockvec.swap_formula(src, q, weights, targets))
        checks += len(cases) + 1
    return checks


def suite_ssqrt(rng: random.Random, *, max_x: int = 200, **_) -> int:
    for x in range(max_x + 1):
        _expect("ssqrt(2^2x) = 2^x", x, 1 << x, blockvec.ssqrt(1 << (2 * x)))
    return max_x + 1


# ---------------------------------------------------------------------------
# genfn
# ---------------------------------------------------------------------------

def suite_genfn(rng: random.Random, *, max_y: int = 4, **_) -> int:
    checks = 0
    for name, rho in GEN_CORPUS.items():
        n = rho.arity
        for y in range(1, max_y + 1):
            f = genfn.genfn_bruteforce(rho, y)
            negated = genfn.GenPredicate(n, lambda *xs, r=rho: 1 - r(*xs))
            _expect(f"not {name}", y, genfn.genfn_bruteforce(negated, y), genfn.gen_logic(f, 0, y, n, "not"))
            transforms = [genfn.AddDummy(), genfn.Permute(tuple(reversed(range(n))))]
            if n >= 2:
                transforms += [genfn.SubstConst(rng.randrange(y)), genfn.IdentifyLast()]
            for t in transforms:
                want = genfn.genfn_bruteforce(genfn.transformed_predicate(rho, t), y)
                _expect(f"{t} {name}", y, want, genfn.gen_explicit(f, t, y, n))
            checks += 1 + len(transforms)
    for p_text, q_text, arity in POLY_PAIRS:
        p = genfn.Polynomial.parse(p_text, arity)
        q = genfn.Polynomial.parse(q_text, arity)
        for y in range(1, max_y + 1):
            want = genfn.genfn_bruteforce(genfn.poly_cmp_predicate(p, q), y)
            _expect(f"poly cmp {p_text} >= {q_text}", y, want, genfn.gen_poly_cmp(p, q, y))
            checks += 1
    for name, bound_text in COUNT_BOUNDS.items():
        psi = GEN_CORPUS[name]
        bound = genfn.Polynomial.parse(bound_text, psi.arity)
        for z in range(1, max_y + 1):
            want = genfn.genfn_bruteforce(genfn.count_predicate(psi, bound), z)
            _expect(f"count {name} below {bound_text}", z, want, genfn.gen_count(psi, bound, z))
            checks += 1
    return checks


def suite_xs(rng: random.Random, *, max_arg: int = 5, **_) -> int:
    checks = 0
    for name, (fn, arity, bound_text) in FUNCTION_CORPUS.items():
        bound = genfn.Polynomial.parse(bound_text, arity)
        graph = genfn.bit_graph(fn, arity, name)

        def fpsi(z: int, graph=graph) -> int:
            return genfn.genfn_bruteforce(graph, z)

        for args in _assignments(arity, max_arg):
            args = tuple(a - 1 for a in args)
            _expect(f"xs_extract {name}", args, fn(*args), genfn.xs_extract(fpsi, bound, args))
            checks += 1
    return checks


# ---------------------------------------------------------------------------
# fomlogic
# ---------------------------------------------------------------------------

def suite_fom(rng: random.Random, *, max_word: int = 6, **_) -> int:
    checks = 0
    for text, m in FOM_CORPUS:
        phi = fomlogic.parse_fom(text)
        table = fomlogic.compile_fom(phi, m)
        for word in _words(max_word):
            for ys in _assignments(m, len(word)):
                model = fomlogic.WordModel(word, {i + 1: y for i, y in enumerate(ys)})
                want = fomlogic.eval_formula(phi, model)
                _expect(f"compiled {text}", (word, ys), want, table.truth(word, ys))
                checks += 1
    return checks


def suite_ffom(rng: random.Random, *, max_x: int = 7, **_) -> int:
    targets = {
        "x and 5": (fomlogic.target_input_bits([0, 2]), lambda x: x & 5),
        "len(x)": (fomlogic.target_length(), lambda x: x.bit_length()),
    }
    checks = 0
    for name, (phi, fn) in targets.items():
        f = fomlogic.ffom_assemble(fomlogic.compile_fom(phi, 1), 1)
        for x in range(max_x + 1):
            _expect(f"ffom {name}", x, fn(x), f(x))
            checks += 1
    return checks


# ---------------------------------------------------------------------------
# minskyq
# ---------------------------------------------------------------------------

def _box(limits: tuple[int, ...]):
    if not limits:
        yield ()
        return
    for rest in _box(limits[1:]):
        for v in range(limits[0] + 1):
            yield (v, *rest)


def verify_machine(m: minskyq.Machine, time_poly: genfn.Polynomial, box: tuple[int, ...]) -> int:
    """extractor(q_eval(compile)) against run() on every input of the box."""
    checks = 0
    for inputs in _box(box):
        want, _ = minskyq.run(m, inputs)
        params, extract = minskyq.compile(m, inputs, time_poly)
        _expect("Q simulation", inputs, want, extract(minskyq.q_eval(params)))
        checks += 1
    return checks


def suite_minsky(rng: random.Random, *, max_input: int | None = None, **_) -> int:
    checks = 0
    for name, (poly_text, box) in MACHINE_BOXES.items():
        m = minskyq.load_machine(MACHINES_DIR / name)
        if max_input is not None:
            box = tuple(min(b, max_input) for b in box)
        poly = genfn.Polynomial.parse(poly_text, m.tapes)
        checks += verify_machine(m, poly, box)
    return checks


def suite_qprop(rng: random.Random, *, count: int = 1000, **_) -> int:
    """q_prop_check on random instances satisfying every hypothesis."""
    for i in range(count):
        r = rng.randint(2, 4)
        t0 = rng.randint(1, 8)
        u = [rng.randrange(16) for _ in range(r - 1)]
        v = [rng.randrange(1, 16) for _ in range(r - 1)]
        x = rng.randint(1, 64)
        params, u_full, v_full = minskyq.q_params_for(u, v, x, t0)
        if not minskyq.q_prop_check(u_full, v_full, params):
            raise VerificationError("q_prop", (u, v, x, t0))
    return count


# ---------------------------------------------------------------------------
# permgroup
# ---------------------------------------------------------------------------

def suite_codes(rng: random.Random, *, prefix: int = 4096, **_) -> int:
    perms = [
        pg.make_pf(lambda x: x + 1, "succ"),
        pg.make_pf(lambda x: x // 2, "half"),
        pg.move(), pg.place(), pg.swap1(), pg.swap2(),
    ]
    for p in perms:
        pg.check_bijective(p, prefix)
    matchings = [pg.px(), pg.del_layer(), pg.s(0, 1), pg.s(1, 3)]
    for p in matchings:
        pg.check_involution(p, prefix)
    _expect("s01(8)", 8, 9, pg.s(0, 1)(8))
    for x in range(16):
        for y in range(16):
            _expect("px", (x, y), pg.c3(x, y, x + 2), pg.px()(pg.c3(x, y, 0)))
    return (len(perms) + len(matchings)) * prefix + 257


def suite_delete(rng: random.Random, *, prefix: int = 4096, **_) -> int:
    f1 = pg.from_pairs([(0, 1)])
    f2 = pg.from_pairs([(0, 2)])
    result = pg.delete_combinator(f1, f2, lambda x: x == 0, prefix)
    pg.check_equal(result, f1, prefix)
    # the code of x + y restricted to even y
    odd_free = pg.delete_odd(pg.code_of(lambda x, y: x + y, "add"))
    for x in range(12):
        for y in range(12):
            cell = pg.c3(x, y, 0)
            want = pg.c3(x, y, x + y + 2) if y % 2 == 0 else cell
            _expect("delete_odd", (x, y), want, odd_free(cell))
    pg.check_involution(odd_free, prefix // 4)
    return 2 * prefix + 144


def _finite_triples(count: int) -> list[pg.CorrectTriple]:
    triples = []
    for i in range(count):
        b = tuple(range(4 * i, 4 * i + 4))
        f = pg.from_pairs([(b[0], b[2]), (b[1], b[3])], f"f{i}")
        g = pg.from_pairs([(b[0], b[1])], f"g{i}")
        triples.append(pg.CorrectTriple.finite(f, g, [b]))
    return triples


def suite_rolall(rng: random.Random, *, n: int | None = None, **_) -> int:
    bands = pg.BandPartition(1)
    _expect("rol(7)", 7, 0, bands.rol(7))
    _expect("rol(12)", 12, 13, bands.rol(12))
    f1, f2 = pg.megadelete([(0, 1, 2, 3)])
    pg.check_equal(pg.power(pg.compose(f1, f2), 2), pg.from_pairs([(0, 2), (1, 3)]), 64)
    checks = 3
    for k in ([n] if n else [1, 2]):
        triples = _finite_triples(k)
        for t in triples:
            pg.check_triple(t)
        asm = pg.two_generator_assembly(triples)
        checks += k * asm.bands.modulus * 64
    return checks


def suite_pipeline(rng: random.Random, *, prefix: int = 256, **_) -> int:
    f = pg.from_pairs([(0, 2)], "(0 2)")
    pg.even_matching_pipeline(f, [pg.from_pairs([(0, 1)])], prefix)
    pg.even_matching_pipeline(pg.identity, [], prefix)
    evens = rng.sample(range(0, 24, 2), 4)
    pairs = [(evens[0], evens[1]), (evens[2], evens[3])]
    g = pg.from_pairs(pairs, "random")
    word = [pg.from_pairs([(a // 2, b // 2)]) for a, b in pairs]
    pg.even_matching_pipeline(g, word, prefix)
    return 3 * prefix


def reassembly_demo(f: pg.Perm, points: int | None = None) -> int:
    """Write f through stationary factors and correct triples, then check the rol/all words.

    Every factor is checked for bijectivity and their product against f on
    [0, points); the words act on E₀ ∪ E₁ and their composition must send
    ν(x) to ν(f(x)) there too.
    """
    points = current().prefix if points is None else points
    r1, r2 = pg.band_factory(2)
    a, b = r1.regular(), r2.regular()
    f1, f2 = pg.stationary_decompose(f, a, b, points)
    b1, b2 = pg.split(b)
    pairs = (
        pg.stationary_to_triples(f1, b2, pg.union(r2.complement().regular(), b1), points)
        + pg.stationary_to_triples(f2, a, r1.complement().regular(), points)
    )
    for factor in (f1, f2, *(h for h, _ in pairs)):
        pg.check_bijective(factor, points)
    for _, t in pairs:
        pg.check_bijective(t.g, points)
        pg.check_triple(t)
    triples = [t for _, t in pairs]
    pg.check_equal(pg.compose(f1, f2), f, points)
    pg.check_equal(pg.compose(*[t.f for t in triples]), f, points)
    bands = pg.BandPartition(len(triples))
    low = bands.low_pair
    sample = [low.nu(x) for x in range(points)]
    asm = pg.two_generator_assembly(triples, points=sample)
    whole = pg.compose(*asm.w_generated)
    for x in range(points):
        _expect("rol/all reassembly", x, low.nu(f(x)), whole(low.nu(x)))
    return points * (2 * len(triples) + 4)


def suite_reassembly(rng: random.Random, *, support: int = 6, prefix: int | None = None, **_) -> int:
    values = list(range(support))
    rng.shuffle(values)
    return reassembly_demo(pg.from_mapping(dict(enumerate(values)), "random"), prefix)


SUITES = {
    "binomial": suite_binomial,
    "heights": suite_heights,
    "blockvec": suite_blockvec,
    "ssqrt": suite_ssqrt,
    "genfn": suite_genfn,
    "xs": suite_xs,
    "fom": suite_fom,
    "ffom": suite_ffom,
    "minsky": suite_minsky,
    "qprop": suite_qprop,
    "codes": suite_codes,
    "delete": suite_delete,
    "rolall": suite_rolall,
    "pipeline": suite_pipeline,
    "reassembly": suite_reassembly,
}

PERM_SUITES = ("codes", "delete", "rolall", "pipeline", "reassembly")


def run_suite(name: str, seed: int, **options) -> SuiteReport:
    """Run one suite; verification failures become a failed report, budget errors propagate."""
    report = SuiteReport(name)
    rng = random.Random(f"{seed}:{name}")
    try:
        report.checks = SUITES[name](rng, **options)
    except VerificationError as exc:
        report.failure = str(exc)
        report.counterexample = repr(exc.counterexample)
    except BudgetError:
        raise
    except RecfunError as exc:
        report.failure = f"{type(exc).__name__}: {exc}"
    logger.info("suite %s: %s", name, "ok" if report.ok else report.failure)
    return report


def run_suites(names, seed: int, **options) -> list[SuiteReport]:
    return [run_suite(name, seed, **options) for name in names]
