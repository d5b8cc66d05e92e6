"""Divide-and-conquer synthesis of conditional programs.

The ``ite``-free part of the grammar is used to find, example by example, a
set of terms that together cover every example.  Predicates are enumerated
bottom-up from the condition nonterminal, and a decision tree over them
routes each example to a term that handles it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Union

from .enumerator import ComponentPool, DeadlineReached
from .search import SearchConfig, SearchStats, Solution, Timeout, solve
from .semantics import make_operator, satisfies
from .terms import BOOL, App, Term


class NoSeparatingPredicate(Exception):
    pass


@dataclass
class CoverMatrix:
    terms: list      # condition-free candidate programs
    covers: list     # per term: frozenset of example indices it satisfies

    def covering(self, idx) -> list:
        return [k for k, c in enumerate(self.covers) if idx in c]


@dataclass
class Leaf:
    term: Term


@dataclass
class Node:
    predicate: Term
    then: "DecisionTree"
    other: "DecisionTree"


DecisionTree = Union[Leaf, Node]


def tree_depth(tree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.then), tree_depth(tree.other))


def _entropy(matrix, subset):
    weights = [len(c & subset) for c in matrix.covers]
    total = sum(weights)
    if not total:
        return 0.0
    return -sum(w / total * math.log2(w / total) for w in weights if w)


def learn_tree(matrix: CoverMatrix, predicates, examples=None, subset=None):
    """Decision tree routing every example to a covering term.

    ``predicates`` is a list of ``(term, outputs)`` pairs, ``outputs`` being
    the predicate's Boolean value on each example.  Splits maximize
    information gain of the term-coverage labelling; the first predicate
    wins ties.
    """
    if subset is None:
        subset = frozenset().union(*matrix.covers) if matrix.covers else frozenset()
        n = len(examples) if examples is not None else (max(subset) + 1 if subset else 0)
        if any(i not in subset for i in range(n)):
            raise ValueError("the cover matrix does not cover every example")
    for term, cover in zip(matrix.terms, matrix.covers):
        if subset <= cover:
            return Leaf(term)
    base = _entropy(matrix, subset)
    best, best_gain = None, None
    for pred, outputs in predicates:
        yes = frozenset(i for i in subset if outputs[i])
        no = subset - yes
        if not yes or not no:
            continue
        gain = base - (len(yes) * _entropy(matrix, yes) + len(no) * _entropy(matrix, no)) / len(subset)
        if best_gain is None or gain > best_gain + 1e-12:
            best, best_gain = (pred, yes, no), gain
    if best is None:
        raise NoSeparatingPredicate(f"no predicate splits examples {sorted(subset)}")
    pred, yes, no = best
    return Node(pred, learn_tree(matrix, predicates, examples, yes),
                learn_tree(matrix, predicates, examples, no))


def tree_to_term(tree, sort) -> Term:
    if isinstance(tree, Leaf):
        return tree.term
    ite = make_operator("ite", [BOOL, sort, sort])
    return App(ite, [tree.predicate, tree_to_term(tree.then, sort), tree_to_term(tree.other, sort)])


def _ite_production(grammar):
    for p in grammar.productions_for(grammar.start):
        if not p.is_leaf and p.head.name == "ite":
            return p
    return None


def solve_with_dnc(problem, config: SearchConfig = None):
    """Synthesize per-example condition-free terms and join them with a learned decision tree."""
    config = config or SearchConfig()
    grammar = problem.grammar
    ite = _ite_production(grammar)
    if ite is None:
        return solve(problem, config)
    clock = time.perf_counter
    start = clock()
    deadline = start + config.timeout
    stats = SearchStats()
    examples = problem.examples
    body = grammar.without("ite")
    sub = replace(problem, grammar=body)

    def finish(outcome):
        stats.wall_time = clock() - start
        return outcome

    def absorb(s):
        for k in ("dequeued", "pruned", "expanded", "enqueued", "seeded", "analyses",
                  "analysis_time", "iterations"):
            setattr(stats, k, getattr(stats, k) + getattr(s, k))
        stats.n = max(stats.n, s.n)

    matrix = CoverMatrix([], [])
    for j, ex in enumerate(examples):
        if matrix.covering(j):
            continue
        remaining = deadline - clock()
        if remaining <= 0:
            return finish(Timeout(stats))
        out = solve(replace(sub, examples=[ex]), replace(config, timeout=remaining, sketches=None))
        absorb(out.stats)
        if not isinstance(out, Solution):
            return finish(type(out)(stats))
        cover = frozenset(i for i, e in enumerate(examples) if satisfies(out.term, [e]))
        matrix.terms.append(out.term)
        matrix.covers.append(cover)
        if len(cover) == len(examples):
            stats.solution_size = out.term.size
            stats.extra = {"cover_terms": 1, "predicates": 0, "tree_depth": 0}
            return finish(Solution(stats, out.term))

    cond = ite.args[0]
    pool = ComponentPool(body.with_start(cond), [ex.inputs for ex in examples],
                         config.concretize_limit)
    limit = config.max_size
    cond_grammar = body.with_start(cond)
    cond_finite = cond_grammar.is_finite()
    cond_max = cond_grammar.max_term_size() if cond_finite else None
    try:
        while True:
            if clock() > deadline or (limit is not None and pool.n >= limit):
                return finish(Timeout(stats))
            pool.grow(None, deadline, clock)
            preds = list(pool.members[cond])
            try:
                tree = learn_tree(matrix, preds, examples)
            except NoSeparatingPredicate:
                if cond_finite and pool.n >= cond_max:
                    # no predicate can ever split this cover; let the plain search decide
                    out = solve(problem, replace(config, timeout=max(deadline - clock(), 1e-3)))
                    absorb(out.stats)
                    if isinstance(out, Solution):
                        stats.solution_size = out.term.size
                        return finish(Solution(stats, out.term))
                    return finish(type(out)(stats))
                continue
            term = tree_to_term(tree, problem.return_sort)
            if not satisfies(term, examples):
                raise AssertionError("decision tree does not reproduce the examples")
            stats.solution_size = term.size
            stats.n = max(stats.n, pool.n)
            stats.extra = {"cover_terms": len(matrix.terms), "predicates": len(preds),
                           "tree_depth": tree_depth(tree)}
            return finish(Solution(stats, term))
    except DeadlineReached:
        return finish(Timeout(stats))
