"""Acceptance checks, one per criterion.

Each check returns ``(ok, detail)``.  Under pytest every criterion is its own
test and a summary block with one PASS/FAIL line per criterion is printed at
the end of the session.  Run directly for the same lines without pytest:

    python3 tests/test_acceptance.py [1 3 7 ...]
"""

import itertools
import random
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from oracles import BENCH, BV4, W, load, members  # noqa: E402

from fbsynth import cli  # noqa: E402
from fbsynth.analyzer import AnalysisDiverged, analyze  # noqa: E402
from fbsynth.dnc import solve_with_dnc  # noqa: E402
from fbsynth.domains import product  # noqa: E402
from fbsynth.domains.bitwise import BitwiseValue, infer_mul_operand, mod_inverse  # noqa: E402
from fbsynth.enumerator import ComponentPool, count_terms  # noqa: E402
from fbsynth.search import SearchConfig, Solution, Timeout, solve  # noqa: E402
from fbsynth.semantics import Example, app, const, satisfies, var  # noqa: E402
from fbsynth.sygus import parse_sketch  # noqa: E402
from fbsynth.terms import App, Const, Hole, Var, holes, replace_at  # noqa: E402

RESULTS = {}

OVERVIEW_SKETCHES = ["(bvashr (bvxor S x) #b0001)", "(bvashr (bvudiv S x) #b0001)", "(bvmul S S)"]

# The worked example's table: position -> (X0, X1, X2) bitwise components.
GOLDEN_TABLE = {
    "ε": ("TTTT", "0011", "0011"),
    "1": ("TTTT", "011T", "011T"),
    "11": ("TTTT", "110T", "110T"),
    "12": ("1011", "1011", "1011"),
    "2": ("0001", "0001", "0001"),
}


# 1 -----------------------------------------------------------------------

def check_1():
    problem = load("overview.sl")
    t0 = time.perf_counter()
    out = solve(problem, SearchConfig(timeout=60))
    elapsed = time.perf_counter() - t0
    if not isinstance(out, Solution):
        return False, f"outcome {out.kind}"
    ok = (satisfies(out.term, problem.examples) and out.term.size <= 7
          and out.stats.n == 3 and elapsed < 5)
    return ok, f"{cli.to_sexpr(out.term)} size={out.term.size} n={out.stats.n} t={elapsed:.3f}s"


# 2 -----------------------------------------------------------------------

def check_2():
    problem = load("overview.sl")
    ex = problem.examples
    xor_sk, div_sk, _ = [parse_sketch(problem, s) for s in OVERVIEW_SKETCHES]

    div = analyze(div_sk, ex, trace=True)
    root0 = div.traces[0][0][0]
    raw = root0.bits.raw_meet(BitwiseValue.const(0b0011, W))
    div_ok = div.is_infeasible() and str(root0.bits) == "0000" and raw == "00BB"

    res = analyze(xor_sk, ex, trace=True)
    table = res.trace_table(0)
    # the chain is X0 (forward), X1 (backward), X2 (forward again, unchanged)
    got = {}
    for pos, *cols in table:
        got[pos] = tuple(c.split(",")[0].strip("⟨") for c in cols[:3])
    table_ok = got == GOLDEN_TABLE and str(res.at((1, 1))[0].bits) == "110T"

    fifo = solve(problem, SearchConfig(timeout=60, queue="fifo",
                                      sketches=[xor_sk, div_sk, parse_sketch(problem, "(bvmul S S)")]))
    sol_ok = (isinstance(fifo, Solution)
              and cli.to_sexpr(fifo.term) == "(bvashr (bvxor (bvadd x #b0001) x) #b0001)"
              and fifo.stats.n == 3)
    detail = (f"(S/x)>>1 root {root0.bits} ⊓ 0011 = {raw}; table {'matches' if table_ok else got}; "
              f"injected-sketch solution {cli.to_sexpr(fifo.term) if isinstance(fifo, Solution) else fifo.kind}")
    return div_ok and table_ok and sol_ok, detail


# 3 -----------------------------------------------------------------------

def _soundness_counts(samples_per_op, seed=3):
    rng = random.Random(seed)
    fwd = bwd = violations = 0
    for op in oracles.operators():
        tab = oracles.table(op)
        for _ in range(samples_per_op):
            args = [oracles.random_value(rng, s) for s in op.arg_sorts]
            sets = [members(a) for a in args]
            res = product.forward(op, args)
            allowed = members(res)
            for combo in itertools.product(*sets):
                if tab[combo] not in allowed:
                    violations += 1
            fwd += 1
            result = oracles.random_value(rng, op.result_sort)
            rset = members(result)
            refined = [members(product.backward(op, i + 1, result, args))
                       for i in range(len(args))]
            for combo in itertools.product(*sets):
                if tab[combo] in rset:
                    for i, c in enumerate(combo):
                        if c not in refined[i]:
                            violations += 1
            bwd += 1
    return fwd, bwd, violations


def check_3():
    t0 = time.perf_counter()
    n_ops = len(oracles.operators())
    per_op = 10_000
    fwd, bwd, bad = _soundness_counts(per_op)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and fwd >= 10_000 and bwd >= 10_000 and elapsed < 300
    return ok, f"{n_ops} operators, {fwd} forward + {bwd} backward tuples, {bad} violations, {elapsed:.1f}s"


# 4 -----------------------------------------------------------------------

def check_4():
    rng = random.Random(4)
    bad = 0
    n = 12_000
    for _ in range(n):
        d = oracles.random_raw_product(rng)
        r = product.reduce(d)
        if not r.leq(d) and not r.is_bottom():
            bad += 1
        if members(r) != members(d):
            bad += 1
        if product.reduce(r) != r:
            bad += 1
    return bad == 0, f"{n} sampled triples, {bad} violations"


# 5 -----------------------------------------------------------------------

_SKETCH_BIN = ["bvand", "bvor", "bvxor", "bvadd", "bvsub", "bvmul", "bvudiv", "bvurem",
               "bvshl", "bvlshr", "bvashr"]
_SKETCH_UN = ["bvnot", "bvneg"]


def random_sketch(rng, budget):
    """Random term with holes over one BV nonterminal ``S`` and variable ``x``."""
    x = var("x", BV4)
    if budget < 3 or rng.random() < 0.25:
        return rng.choice([Hole("S", BV4), x, const(rng.randrange(16), W), Hole("S", BV4)])
    if budget >= 4 and rng.random() < 0.75:
        left = rng.randint(1, budget - 2)
        a = random_sketch(rng, left)
        b = random_sketch(rng, budget - 1 - a.size)
        return app(rng.choice(_SKETCH_BIN), a, b)
    return app(rng.choice(_SKETCH_UN), random_sketch(rng, budget - 1))


def _leq_chain(steps):
    for before, after in zip(steps, steps[1:]):
        for a, b in zip(after, before):
            if not a.leq(b) and not a.is_bottom():
                return False
    return True


def check_5():
    rng = random.Random(5)
    checked = violations = 0
    nonmono = diverged = 0
    while checked < 1000:
        P = random_sketch(rng, rng.randint(3, 7))
        hs = holes(P)
        if not hs or len(hs) > 3 or P.size > 7:
            continue
        xin, out = rng.randrange(16), rng.randrange(16)
        ex = [Example({"x": xin}, out)]
        try:
            res = analyze(P, ex, trace=True)
        except AnalysisDiverged:
            diverged += 1
            checked += 1
            continue
        if not _leq_chain(res.traces[0]):
            nonmono += 1
        # every completion reduces to a choice of hole values
        for vals in itertools.product(range(16), repeat=len(hs)):
            Q = P
            for (pos, _), v in zip(hs, vals):
                Q = replace_at(Q, pos, const(v, W))
            if satisfies(Q, ex):
                for (pos, _), v in zip(hs, vals):
                    if v not in members(res.at(pos)[0]):
                        violations += 1
        checked += 1
    ok = violations == 0 and nonmono == 0 and diverged == 0
    return ok, (f"{checked} sketches: {nonmono} non-decreasing chains, {diverged} hit the cap, "
                f"{violations} necessity violations")


# 6 -----------------------------------------------------------------------

def check_6():
    bad = []
    for n2, n in itertools.product(range(16), repeat=2):
        sols = {x for x in range(16) if (x * n2) % 16 == n}
        got = infer_mul_operand(BitwiseValue.const(n2, W), BitwiseValue.const(n, W))
        gset = set(got.members())
        if sols:
            if gset != sols:
                bad.append((n2, n, str(got)))
        elif not got.is_bottom():
            bad.append((n2, n, str(got)))
    inv_bad = 0
    inv_cases = 0
    for k in range(1, 9):
        mod = 1 << k
        for a in range(1, mod, 2):
            brute = [y for y in range(mod) if (a * y) % mod == 1]
            inv_cases += 1
            if [mod_inverse(a, mod)] != brute:
                inv_bad += 1
    for mod in range(2, 40):
        for a in range(1, mod):
            brute = [y for y in range(mod) if (a * y) % mod == 1]
            if brute:
                inv_cases += 1
                if mod_inverse(a, mod) != brute[0]:
                    inv_bad += 1
    ok = not bad and inv_bad == 0
    return ok, f"256 (n2,n) cases, {len(bad)} mismatches; {inv_cases} inverse checks, {inv_bad} wrong"


# 7 -----------------------------------------------------------------------

def check_7():
    problem = load("overview.sl")
    pool = ComponentPool(problem.grammar, [e.inputs for e in problem.examples])
    for n in (1, 2, 3):
        pool.grow(n)
    x, one = Var("x", BV4), Const(1, BV4)
    rep = pool.index["S"].get((0b1100,))
    has_sum = rep is not None and isinstance(rep, App) and rep.op.name == "bvadd" \
        and set(rep.children) == {x, one}
    syntactic = sum(count_terms(problem.grammar, "S", k) for k in (1, 2, 3))
    smaller = len(pool.members["S"]) < syntactic

    # path equivalence on a multi-example pool
    rng = random.Random(7)
    inputs = [{"x": v} for v in (0b1011, 0b0110, 0b0001)]
    big = ComponentPool(problem.grammar, inputs)
    for n in range(1, 5):
        big.grow(n)
    vecs = [out for _, out in big.members["S"]]
    mismatches = compared = 0
    for k in range(1000):
        if k % 2:
            base = rng.choice(vecs)
            pre = []
            for v in base:
                vals = {v} | {rng.randrange(16) for _ in range(rng.randint(0, 2))}
                pre.append(product.alpha_set(vals, BV4))
        else:
            pre = [oracles.random_value(rng, BV4) for _ in inputs]
        scan = big.components_satisfying("S", pre, path="scan")
        truth = [t for t, out in big.members["S"]
                 if all(o in members(p) for o, p in zip(out, pre))]
        try:
            via_index = big.components_satisfying("S", pre, limit=64, path="index")
        except ValueError:
            via_index = big.components_satisfying("S", pre, limit=1 << 20, path="index")
        compared += 1
        if scan != via_index or scan != truth:
            mismatches += 1
    ok = has_sum and smaller and mismatches == 0
    return ok, (f"x+0001 ↦ (1100): {has_sum}; pool {len(pool.members['S'])} < syntactic {syntactic}; "
                f"{compared} preconditions, {mismatches} path mismatches")


# 8 -----------------------------------------------------------------------

def check_8():
    files = sorted((BENCH / "hd").glob("*.sl"))
    times = {}
    failures = []
    for f in files:
        problem = cli.parse_problem(f.read_text())
        if problem.width != 64:
            failures.append(f"{f.stem}: width {problem.width}")
        t0 = time.perf_counter()
        out = solve(problem, SearchConfig(timeout=60))
        times[f.stem] = time.perf_counter() - t0
        if not (isinstance(out, Solution) and satisfies(out.term, problem.examples)):
            failures.append(f"{f.stem}: {out.kind}")
        elif times[f.stem] >= 60:
            failures.append(f"{f.stem}: {times[f.stem]:.1f}s")
    # the pruning effect: try the slowest problems with pruning off and a 5x budget
    effect = None
    for stem in sorted(times, key=times.get, reverse=True)[:3]:
        problem = cli.parse_problem((BENCH / "hd" / f"{stem}.sl").read_text())
        budget = max(5 * times[stem], 1.0)
        t0 = time.perf_counter()
        out = solve(problem, SearchConfig(timeout=budget, pruning="off"))
        t_off = time.perf_counter() - t0
        if isinstance(out, Timeout) or t_off >= 5 * times[stem]:
            effect = f"{stem}: {times[stem]:.2f}s pruned vs {out.kind} after {t_off:.2f}s unpruned"
            break
    ok = len(files) >= 10 and not failures and effect is not None
    slowest = max(times.values()) if times else 0
    return ok, (f"{len(files)} problems, {len(files) - len(failures)} solved (slowest {slowest:.2f}s); "
                f"{effect or 'no 5x pruning effect observed'}" + (f"; {failures}" if failures else ""))


# 9 -----------------------------------------------------------------------

def check_9():
    problem = load("max2.sl")
    t0 = time.perf_counter()
    out = solve_with_dnc(problem, SearchConfig(timeout=60))
    elapsed = time.perf_counter() - t0
    if not isinstance(out, Solution):
        return False, f"dnc outcome {out.kind}"
    term = out.term
    is_ite = isinstance(term, App) and term.op.name == "ite"
    ok = (len(problem.examples) == 4 and is_ite and satisfies(term, problem.examples)
          and problem.grammar.derives(term) and elapsed < 60)
    code = cli.main(["solve", str(BENCH / "max2.sl"), "--dnc", "--timeout", "60"])
    ok = ok and code == 0
    return ok, f"{cli.to_sexpr(term)} in {elapsed:.3f}s, tree depth {out.stats.extra.get('tree_depth')}"


# 10 ----------------------------------------------------------------------

def check_10():
    with tempfile.TemporaryDirectory() as tmp:
        paths = [Path(tmp) / "a.csv", Path(tmp) / "b.csv"]
        codes = [cli.main(["bench", str(BENCH / "hd"), "--timeout", "60", "--csv", str(p)])
                 for p in paths]
        a, b = (cli.strip_timing(p.read_text()) for p in paths)
    rows = a.count("\n") - 2
    ok = codes == [0, 0] and a == b and rows >= 10
    return ok, f"{rows} records; identical modulo timing columns: {a == b}"


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6,
          7: check_7, 8: check_8, 9: check_9, 10: check_10}

TITLES = {1: "overview problem solved at n=3", 2: "worked-example pruning and table",
          3: "transfer-function soundness at w=4", 4: "reduction soundness",
          5: "decreasing chain and backward necessity", 6: "InferMulOp and Euclid oracle",
          7: "enumerator pool and path equivalence", 8: "64-bit bit-twiddling suite",
          9: "divide-and-conquer max", 10: "bench determinism"}


def run(n):
    try:
        ok, detail = CHECKS[n]()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {n:>2} [{'PASS' if ok else 'FAIL'}] {TITLES[n]}: {detail}"
    RESULTS[n] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n):
    ok, line = run(n)
    assert ok, line


if __name__ == "__main__":
    wanted = [int(a) for a in sys.argv[1:]] or sorted(CHECKS)
    results = [run(n)[0] for n in wanted]
    sys.exit(0 if all(results) else 1)
