import pytest

from fbsynth.dnc import (CoverMatrix, Leaf, Node, NoSeparatingPredicate, learn_tree,
                         solve_with_dnc, tree_depth, tree_to_term)
from fbsynth.search import SearchConfig, Solution, Unrealizable, solve
from fbsynth.semantics import app, const, satisfies, var
from fbsynth.sygus import parse_problem
from fbsynth.terms import BitVecSort, to_sexpr

import oracles

BV8 = BitVecSort(8)
X, Y = var("x", BV8), var("y", BV8)


def test_single_covering_term_is_a_leaf():
    m = CoverMatrix([X, Y], [frozenset({0, 1, 2}), frozenset({1})])
    assert learn_tree(m, [], examples=[0, 1, 2]) == Leaf(X)


def test_one_split_separates_two_terms():
    m = CoverMatrix([X, Y], [frozenset({0, 2}), frozenset({1, 3})])
    useless = (const(1, 8), (True, True, True, True))
    exact = (const(2, 8), (True, False, True, False))
    tree = learn_tree(m, [useless, exact], examples=range(4))
    assert tree == Node(const(2, 8), Leaf(X), Leaf(Y))
    assert tree_depth(tree) == 1


def test_gain_prefers_the_cleaner_split():
    m = CoverMatrix([X, Y], [frozenset({0, 1, 2}), frozenset({3})])
    rough = ("rough", (True, True, False, False))
    clean = ("clean", (False, False, False, True))
    tree = learn_tree(m, [rough, clean], examples=range(4))
    assert tree.predicate == "clean"


def test_no_separating_predicate():
    m = CoverMatrix([X, Y], [frozenset({0}), frozenset({1})])
    with pytest.raises(NoSeparatingPredicate):
        learn_tree(m, [("p", (True, True))], examples=range(2))


def test_uncovered_example_rejected():
    with pytest.raises(ValueError):
        learn_tree(CoverMatrix([X], [frozenset({0})]), [], examples=range(2))


def test_tree_to_term_builds_ite():
    p = app("bvule", X, Y)
    t = tree_to_term(Node(p, Leaf(Y), Leaf(X)), BV8)
    assert to_sexpr(t) == "(ite (bvule x y) y x)"


def test_max2_produces_conditional():
    prob = oracles.load("max2.sl")
    out = solve_with_dnc(prob, SearchConfig(timeout=60))
    assert isinstance(out, Solution)
    assert satisfies(out.term, prob.examples)
    assert prob.grammar.derives(out.term)
    assert out.term.op.name == "ite"
    assert out.stats.extra["cover_terms"] >= 2 and out.stats.extra["tree_depth"] >= 1


def test_dnc_deterministic():
    prob = oracles.load("max2.sl")
    a = solve_with_dnc(prob, SearchConfig(timeout=60))
    b = solve_with_dnc(prob, SearchConfig(timeout=60))
    assert a.term == b.term


@pytest.mark.parametrize("name", ["overview.sl", "hd/hd01.sl"])
def test_without_ite_matches_plain_solve(name):
    prob = oracles.load(name)
    a = solve_with_dnc(prob, SearchConfig(timeout=30))
    b = solve(prob, SearchConfig(timeout=30))
    assert a.kind == b.kind and a.term == b.term
    assert "ite" not in to_sexpr(a.term)


NO_ANSWER = """
(set-logic BV)
(synth-fun f ((x (_ BitVec 8))) (_ BitVec 8)
  ((Start (_ BitVec 8)) (B Bool))
  ((Start (_ BitVec 8) (x (ite B Start Start)))
   (B Bool ((bvule Start Start)))))
(constraint (= (f #x05) #x07))
(check-synth)
"""


def test_unrealizable_propagates():
    out = solve_with_dnc(parse_problem(NO_ANSWER), SearchConfig(timeout=20))
    assert isinstance(out, Unrealizable)
