import pytest

from fbsynth.semantics import app, const, satisfies, var
from fbsynth.sygus import (IncompleteTerm, NonPBEConstraint, ParseError, UnsupportedFeature,
                           parse_problem, parse_sketch, read_sexprs, render_problem,
                           render_solution)
from fbsynth.terms import BOOL, BitVecSort, Hole

from oracles import BENCH

BV4 = BitVecSort(4)
HEADER = """(set-logic BV)
(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4)
  ((S (_ BitVec 4)))
  ((S (_ BitVec 4) (x #b0001 (bvadd S S)))))
"""


def test_overview_problem():
    p = parse_problem((BENCH / "overview.sl").read_text())
    assert p.name == "f" and p.width == 4
    assert [(e.inputs, e.output) for e in p.examples] == [({"x": 0b1011}, 0b0011)]
    ops = {prod.head.name for prod in p.grammar.productions if not prod.is_leaf}
    assert ops == {"bvand", "bvor", "bvxor", "bvadd", "bvmul", "bvudiv", "bvashr"}


def test_literal_syntaxes():
    text = HEADER + "(constraint (= (f (_ bv11 4)) #xc))\n(constraint (= #b0011 (f #b0001)))"
    p = parse_problem(text)
    assert [(e.inputs["x"], e.output) for e in p.examples] == [(11, 12), (1, 3)]


def test_no_constraints_is_rejected():
    with pytest.raises(NonPBEConstraint):
        parse_problem(HEADER)


def test_non_literal_rhs_is_rejected():
    with pytest.raises(NonPBEConstraint):
        parse_problem(HEADER + "(constraint (= (f #b1011) (f #b0011)))")
    with pytest.raises(NonPBEConstraint):
        parse_problem(HEADER + "(constraint (bvule (f #b1011) #b0011))")


def test_parse_error_has_location():
    with pytest.raises(ParseError) as info:
        parse_problem("(set-logic BV)\n(synth-fun f ((x (_ BitVec 4)) (_ BitVec 4)\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_problem(HEADER + "(constraint (= (f #b101) #b0011))")


def test_unsupported_features():
    with pytest.raises(UnsupportedFeature):
        parse_problem(HEADER.replace("(bvadd S S)", "(bvrotl S S)") + "(constraint (= (f #b1011) #b0011))")
    with pytest.raises(UnsupportedFeature):
        parse_problem(HEADER + "(define-fun g () (_ BitVec 4) #b0000)")


def test_v1_grammar_and_comments():
    text = """; comment
(set-logic BV)
(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4)
  ((Start (_ BitVec 4) (x (bvnot Start))))) ; trailing
(declare-var x (_ BitVec 4))
(constraint (= (f #b0000) #b1111))
(check-synth)"""
    p = parse_problem(text)
    assert p.grammar.start == "Start"
    assert satisfies(app("bvnot", var("x", BV4)), p.examples)


def test_nested_productions_get_fresh_nonterminals():
    text = HEADER.replace("(bvadd S S)", "(bvadd S (bvnot x))") + "(constraint (= (f #b1011) #b0011))"
    p = parse_problem(text)
    assert len(p.grammar.nonterminals) == 3
    x = var("x", BV4)
    assert p.grammar.derives(app("bvadd", x, app("bvnot", x)))
    assert not p.grammar.derives(app("bvadd", x, x))


def test_render_solution():
    p = parse_problem((BENCH / "overview.sl").read_text())
    x, one = var("x", BV4), const(1, 4)
    sol = app("bvashr", app("bvxor", app("bvadd", x, one), x), one)
    assert render_solution(p, sol) == ("(define-fun f ((x (_ BitVec 4))) (_ BitVec 4) "
                                       "(bvashr (bvxor (bvadd x #b0001) x) #b0001))")
    assert render_solution(p, x) == "(define-fun f ((x (_ BitVec 4))) (_ BitVec 4) x)"
    with pytest.raises(IncompleteTerm):
        render_solution(p, app("bvadd", Hole("S", BV4), x))


def test_render_bool_problem():
    text = """(set-logic SAT)
(synth-fun g ((a Bool) (b Bool)) Bool ((B Bool)) ((B Bool (a b (and B B) (or B B)))))
(constraint (= (g true false) false))"""
    p = parse_problem(text)
    a, b = var("a", BOOL), var("b", BOOL)
    assert render_solution(p, app("and", a, b)) == "(define-fun g ((a Bool) (b Bool)) Bool (and a b))"


@pytest.mark.parametrize("name", ["overview.sl", "max2.sl", "x_only.sl", "hd/hd11.sl"])
def test_render_problem_round_trip(name):
    p = parse_problem((BENCH / name).read_text())
    again = parse_problem(render_problem(p))
    assert again.grammar == p.grammar
    assert again.examples == p.examples
    assert parse_problem(render_problem(again)).grammar == again.grammar


def test_parse_sketch():
    p = parse_problem((BENCH / "overview.sl").read_text())
    t = parse_sketch(p, "(bvashr (bvxor S x) #b0001)")
    assert t.size == 5 and not t.complete
    assert p.grammar.derives(t)
    with pytest.raises(ParseError):
        parse_sketch(p, "(bvashr (bvxor Q x) #b0001)")


def test_reader_locations():
    forms = read_sexprs("(a b)\n  (c (d e))")
    assert [f.line for f in forms] == [1, 2]
    assert forms[1].col == 3
