from types import SimpleNamespace

import pytest

from fbsynth.analyzer import analyze
from fbsynth.domains.product import BVAbs, alpha_set
from fbsynth.search import (NoHoles, SearchConfig, Solution, Timeout, Unrealizable, pick_hole,
                            sketch_gen, solve)
from fbsynth.semantics import satisfies
from fbsynth.sygus import parse_problem, parse_sketch
from fbsynth.terms import to_sexpr

import oracles

P = oracles.load("overview.sl")
OVERVIEW_SKETCHES = ["(bvashr (bvxor S x) #b0001)", "(bvashr (bvudiv S x) #b0001)", "(bvmul S S)"]

CONST_ONLY = """
(set-logic BV)
(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4) ((S (_ BitVec 4))) ((S (_ BitVec 4) (#b0001 #b0110))))
(constraint (= (f #b0000) #b0110))
(check-synth)
"""


def sk(text, problem=P):
    return parse_sketch(problem, text)


def test_sketch_gen_height_one():
    got = [to_sexpr(t) for t in sketch_gen(P.grammar, 1)]
    assert got[:2] == ["x", "#b0001"]
    for op in ("bvand", "bvor", "bvxor", "bvadd", "bvmul", "bvudiv", "bvashr"):
        assert f"({op} S S)" in got
    assert "S" not in got
    assert len(got) == len(set(got))
    # frontier positions may also be leaves
    assert "(bvadd x #b0001)" in got


def test_sketch_gen_height_two_contains_overview_set():
    got = set(sketch_gen(P.grammar, 2))
    for s in OVERVIEW_SKETCHES:
        assert sk(s) in got
    sizes = [t.size for t in sketch_gen(P.grammar, 2)]
    assert sizes == sorted(sizes)


def test_sketch_gen_constants_only():
    prob = parse_problem(CONST_ONLY)
    assert [to_sexpr(t) for t in sketch_gen(prob.grammar, 3)] == ["#b0001", "#b0110"]


def test_pick_hole():
    one = sk("(bvashr (bvxor S x) #b0001)")
    assert pick_hole(one, analyze(one, P.examples)) == (1, 1)
    two = sk("(bvmul S S)")
    assert pick_hole(two, analyze(two, P.examples)) == (1,)
    assert pick_hole(two, None) == (1,)
    pre = {(1,): (BVAbs.top(4),), (2,): (alpha_set({3, 9}, oracles.BV4),)}
    stub = SimpleNamespace(at=pre.__getitem__)
    assert pick_hole(two, stub) == (2,)
    pre[(1,)] = (alpha_set({1, 4}, oracles.BV4),)
    assert pick_hole(two, stub) == (1,)
    with pytest.raises(NoHoles):
        pick_hole(sk("x"), None)


def test_overview_default_search():
    out = solve(P, SearchConfig(timeout=30))
    assert isinstance(out, Solution) and out.kind == "solution"
    assert satisfies(out.term, P.examples)
    assert P.grammar.derives(out.term)


def test_overview_with_injected_sketches():
    cfg = SearchConfig(timeout=30, queue="fifo", sketches=[sk(s) for s in OVERVIEW_SKETCHES])
    out = solve(P, cfg)
    assert to_sexpr(out.term) == "(bvashr (bvxor (bvadd x #b0001) x) #b0001)"
    assert out.stats.n == 3 and out.term.size == 7


def test_division_sketch_alone_is_unrealizable():
    out = solve(P, SearchConfig(timeout=10, sketches=[sk(OVERVIEW_SKETCHES[1])]))
    assert isinstance(out, Unrealizable)
    assert out.stats.pruned == 1 and out.stats.expanded == 0


def test_x_only_unrealizable():
    out = solve(oracles.load("x_only.sl"), SearchConfig(timeout=10))
    assert isinstance(out, Unrealizable) and out.kind == "unrealizable"


def test_constant_grammar_solved():
    out = solve(parse_problem(CONST_ONLY), SearchConfig(timeout=10))
    assert to_sexpr(out.term) == "#b0110"


@pytest.mark.parametrize("name", ["overview.sl", "x_only.sl", "max2.sl", "hd/hd01.sl",
                                  "hd/hd03.sl", "hd/hd07.sl"])
def test_pruning_never_changes_classification(name):
    prob = oracles.load(name)
    kinds = {p: solve(prob, SearchConfig(timeout=60, pruning=p)).kind
             for p in ("full", "forward", "off")}
    assert len(set(kinds.values())) == 1, kinds


@pytest.mark.parametrize("name", ["overview.sl", "max2.sl", "hd/hd01.sl", "hd/hd09.sl"])
def test_queue_policies_both_valid(name):
    prob = oracles.load(name)
    for q in ("size", "fifo"):
        out = solve(prob, SearchConfig(timeout=60, queue=q))
        assert isinstance(out, Solution)
        assert satisfies(out.term, prob.examples)


def test_topdown_mode():
    out = solve(P, SearchConfig(timeout=30, mode="topdown"))
    assert isinstance(out, Solution) and satisfies(out.term, P.examples)
    assert out.stats.n == 1 and out.stats.height >= 1


def test_max_size_gives_timeout():
    out = solve(oracles.load("hd/hd11.sl"), SearchConfig(max_size=2))
    assert isinstance(out, Timeout) and out.stats.n == 2


def test_short_timeout():
    out = solve(oracles.load("hd/hd14.sl"), SearchConfig(timeout=0.2))
    assert isinstance(out, Timeout) and out.kind == "timeout"
    assert out.stats.wall_time < 5


@pytest.mark.parametrize("kwargs", [dict(max_height=0), dict(timeout=0), dict(mode="sideways"),
                                    dict(pruning="some"), dict(queue="lifo")])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


@pytest.mark.parametrize("name", ["overview.sl", "max2.sl", "x_only.sl", "hd/hd02.sl"])
def test_stats_consistency(name):
    out = solve(oracles.load(name), SearchConfig(timeout=60, trace=True))
    st = out.stats
    found = isinstance(out, Solution)
    assert st.dequeued == st.pruned + st.expanded + found
    assert st.dequeued <= st.seeded + st.enqueued
    assert st.analyses <= st.dequeued
    assert len(st.pool_sizes) == st.n
    assert st.events and st.events[0][0] == "iteration"
    d = st.as_dict()
    assert d["pool_max_n"] == st.n and d["solution_size"] == (out.term.size if found else None)
