"""Regular tree grammars over the supported signature."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .terms import App, Const, Hole, Operator, Term, Var


class GrammarError(ValueError):
    pass


@dataclass(frozen=True)
class Production:
    """``lhs -> head(args...)``; leaf productions have a Var/Const head and no args."""

    lhs: str
    head: Union[Operator, Var, Const]
    args: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return not isinstance(self.head, Operator)

    def instantiate(self, children=()) -> Term:
        if self.is_leaf:
            return self.head
        return App(self.head, children)

    def sketch(self, sorts) -> Term:
        """The one-step expansion with every argument left as a hole."""
        if self.is_leaf:
            return self.head
        return App(self.head, [Hole(a, sorts[a]) for a in self.args])


class RegularTreeGrammar:
    def __init__(self, nonterminals: dict, start: str, productions):
        self.nonterminals = dict(nonterminals)
        self.start = start
        self.productions = tuple(productions)
        self._by_lhs = {nt: [] for nt in self.nonterminals}
        for p in self.productions:
            if p.lhs not in self._by_lhs:
                raise GrammarError(f"production for undeclared nonterminal {p.lhs}")
            self._by_lhs[p.lhs].append(p)
        self._validate()

    def _validate(self):
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start} is not a nonterminal")
        for p in self.productions:
            sort = self.nonterminals[p.lhs]
            if p.is_leaf:
                if p.args:
                    raise GrammarError("leaf production with arguments")
                if p.head.sort != sort:
                    raise GrammarError(f"{p.head!r} does not have sort {sort} of {p.lhs}")
                continue
            if len(p.args) != p.head.arity:
                raise GrammarError(f"{p.head.name} given {len(p.args)} arguments")
            for a, s in zip(p.args, p.head.arg_sorts):
                if a not in self.nonterminals:
                    raise GrammarError(f"unknown nonterminal {a}")
                if self.nonterminals[a] != s:
                    raise GrammarError(f"{a} has sort {self.nonterminals[a]}, {p.head.name} wants {s}")
            if p.head.result_sort != sort:
                raise GrammarError(f"{p.head.name} does not produce sort {sort} of {p.lhs}")

    @property
    def signature(self) -> set:
        return {p.head for p in self.productions if not p.is_leaf}

    def productions_for(self, nt: str) -> list:
        return self._by_lhs[nt]

    def leaves(self, nt: str) -> list:
        return [p.head for p in self._by_lhs[nt] if p.is_leaf]

    def sort_of(self, nt: str):
        return self.nonterminals[nt]

    def derives(self, t: Term, nt: str = None) -> bool:
        """Whether ``t`` (possibly with holes) can be derived from ``nt``."""
        nt = self.start if nt is None else nt
        if isinstance(t, Hole):
            return t.nonterminal == nt
        for p in self._by_lhs[nt]:
            if p.is_leaf:
                if p.head == t:
                    return True
            elif isinstance(t, App) and t.op == p.head:
                if all(self.derives(c, a) for c, a in zip(t.children, p.args)):
                    return True
        return False

    def productive(self) -> set:
        """Nonterminals that derive at least one complete term."""
        done = set()
        changed = True
        while changed:
            changed = False
            for p in self.productions:
                if p.lhs not in done and all(a in done for a in p.args):
                    done.add(p.lhs)
                    changed = True
        return done

    def reachable(self, nt: str = None) -> set:
        seen = {self.start if nt is None else nt}
        todo = list(seen)
        while todo:
            for p in self._by_lhs[todo.pop()]:
                for a in p.args:
                    if a not in seen:
                        seen.add(a)
                        todo.append(a)
        return seen

    def is_finite(self) -> bool:
        """True iff the language of the start symbol is finite."""
        live = self.productive()
        reach = [nt for nt in self.reachable() if nt in live]
        graph = {nt: [a for p in self._by_lhs[nt] if all(x in live for x in p.args)
                      for a in p.args] for nt in reach}
        state = {}

        def cyclic(nt):
            state[nt] = 1
            for a in graph[nt]:
                s = state.get(a)
                if s == 1 or (s is None and cyclic(a)):
                    return True
            state[nt] = 2
            return False

        return not any(state.get(nt) is None and cyclic(nt) for nt in reach)

    def max_term_size(self) -> int:
        """Largest derivable term size from the start symbol (finite grammars only)."""
        if not self.is_finite():
            raise GrammarError("grammar language is infinite")
        live = self.productive()

        @lru_cache(maxsize=None)
        def best(nt):
            sizes = [1 + sum(best(a) for a in p.args) for p in self._by_lhs[nt]
                     if all(a in live for a in p.args)]
            return max(sizes, default=0)

        return best(self.start)

    def without(self, op_name: str) -> "RegularTreeGrammar":
        keep = [p for p in self.productions if p.is_leaf or p.head.name != op_name]
        return RegularTreeGrammar(self.nonterminals, self.start, keep)

    def with_start(self, start: str) -> "RegularTreeGrammar":
        return RegularTreeGrammar(self.nonterminals, start, self.productions)

    def __eq__(self, other):
        return (isinstance(other, RegularTreeGrammar) and self.start == other.start
                and self.nonterminals == other.nonterminals
                and self.productions == other.productions)

    __hash__ = None

    def __repr__(self):
        return f"RegularTreeGrammar(start={self.start!r}, {len(self.productions)} productions)"
