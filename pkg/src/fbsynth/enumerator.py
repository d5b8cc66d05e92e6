"""Bottom-up component pool with observational-equivalence deduplication.

Components are complete terms, grouped per nonterminal and stratified by
size.  Two components of the same nonterminal never share an output vector
on the example inputs; the first one found is kept.
"""

from __future__ import annotations

import itertools
import math
from array import array
from collections import Counter
from functools import lru_cache

from . import kernels
from .domains.product import BoolAbs, concretize_if_small
from .semantics import BOOL_OPS, BV_BINARY, BV_COMPARE, BV_UNARY, eval_term
from .terms import BitVecSort


class DeadlineReached(Exception):
    pass


def compositions(total: int, parts: int):
    """Ordered ways to write ``total`` as ``parts`` positive integers, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _vector_op(op):
    """Elementwise evaluator over output vectors for one operator."""
    name = op.name
    if name in BV_BINARY:
        f, w = BV_BINARY[name], op.result_sort.width
        return lambda a, b: tuple(f(x, y, w) for x, y in zip(a, b))
    if name in BV_UNARY:
        f, w = BV_UNARY[name], op.result_sort.width
        return lambda a: tuple(f(x, w) for x in a)
    if name in BV_COMPARE:
        f, w = BV_COMPARE[name], op.arg_sorts[0].width
        return lambda a, b: tuple(f(x, y, w) for x, y in zip(a, b))
    if name == "=":
        return lambda a, b: tuple(x == y for x, y in zip(a, b))
    if name == "ite":
        return lambda c, a, b: tuple(x if k else y for k, x, y in zip(c, a, b))
    f = BOOL_OPS[name]
    if name == "not":
        return lambda a: tuple(f(x) for x in a)
    return lambda a, b: tuple(f(x, y) for x, y in zip(a, b))


class ComponentPool:
    def __init__(self, grammar, inputs, concretize_limit: int = 64):
        self.grammar = grammar
        self.inputs = [dict(i) for i in inputs]
        self.m = len(self.inputs)
        self.limit = concretize_limit
        self.n = 0
        nts = list(grammar.nonterminals)
        self.layers = {nt: {} for nt in nts}       # nt -> size -> [(term, outputs)]
        self.index = {nt: {} for nt in nts}        # nt -> outputs -> term (the value index)
        self.rank = {nt: {} for nt in nts}         # nt -> outputs -> insertion rank
        self.members = {nt: [] for nt in nts}      # nt -> [(term, outputs)] in insertion order
        self.outputs_of = {}                       # term -> outputs, for every stored term
        self.tried = Counter()                     # nt -> candidate terms evaluated
        self.sizes_per_n = []
        self._flat = {}
        for nt in nts:
            sort = grammar.sort_of(nt)
            if isinstance(sort, BitVecSort) and sort.width <= 64:
                self._flat[nt] = array("Q")
            elif isinstance(sort, BitVecSort):
                self._flat[nt] = []
        self._vec_ops = {}

    def __len__(self):
        return sum(len(v) for v in self.members.values())

    def size_of(self, nt: str) -> int:
        return len(self.members[nt])

    def _insert(self, nt, size, term, outputs):
        self.tried[nt] += 1
        if outputs in self.index[nt]:
            return False
        self.index[nt][outputs] = term
        self.rank[nt][outputs] = len(self.members[nt])
        self.members[nt].append((term, outputs))
        self.layers[nt].setdefault(size, []).append((term, outputs))
        self.outputs_of.setdefault(term, outputs)
        flat = self._flat.get(nt)
        if flat is not None:
            flat.extend(outputs)
        return True

    def grow(self, n: int = None, deadline=None, clock=None):
        """Add every component of size exactly ``n`` (default: one more than the current bound)."""
        n = self.n + 1 if n is None else n
        if n != self.n + 1:
            raise ValueError(f"pool is at size {self.n}; cannot grow to {n}")
        g = self.grammar
        if n == 1:
            for p in g.productions:
                if p.is_leaf:
                    t = p.head
                    self._insert(p.lhs, 1, t, tuple(eval_term(t, i) for i in self.inputs))
        else:
            ticks = 0
            for p in g.productions:
                if p.is_leaf:
                    continue
                f = self._vec_ops.get(p.head)
                if f is None:
                    f = self._vec_ops[p.head] = _vector_op(p.head)
                for sizes in compositions(n - 1, len(p.args)):
                    pools = [self.layers[a].get(s, ()) for a, s in zip(p.args, sizes)]
                    if not all(pools):
                        continue
                    for combo in itertools.product(*pools):
                        ticks += 1
                        if deadline is not None and ticks % 4096 == 0 and clock() > deadline:
                            raise DeadlineReached
                        outputs = f(*[c[1] for c in combo])
                        if outputs in self.index[p.lhs]:
                            self.tried[p.lhs] += 1
                            continue
                        self._insert(p.lhs, n, p.instantiate([c[0] for c in combo]), outputs)
        self.n = n
        self.sizes_per_n.append(len(self))
        return self

    def components(self, nt: str) -> list:
        return [t for t, _ in self.members[nt]]

    def components_satisfying(self, nt: str, precondition, limit: int = None,
                              path: str = "auto") -> list:
        """Components of ``nt`` whose outputs on every example lie in the precondition.

        ``path`` forces ``"index"`` (concretize and look up) or ``"scan"``
        (filter the whole pool); ``"auto"`` picks the index when the
        concretized tuple space is at most ``limit``.  Results are in pool order.
        """
        limit = self.limit if limit is None else limit
        if len(precondition) != self.m:
            raise ValueError("precondition must have one entry per example")
        if any(v.is_bottom() for v in precondition):
            return []
        if path != "scan":
            sets = self._concretize(precondition, limit)
            if sets is not None:
                return self._by_index(nt, sets)
            if path == "index":
                raise ValueError("precondition does not concretize within the limit")
        return self._by_scan(nt, precondition)

    def _concretize(self, precondition, limit):
        sets = []
        total = 1
        for v in precondition:
            s = concretize_if_small(v, limit)
            if s is None:
                return None
            total *= len(s)
            if total > limit:
                return None
            sets.append(s)
        return sets

    def _by_index(self, nt, sets):
        index, rank = self.index[nt], self.rank[nt]
        hits = [vec for vec in itertools.product(*sets) if vec in index]
        hits.sort(key=rank.__getitem__)
        return [index[vec] for vec in hits]

    def _by_scan(self, nt, precondition):
        members = self.members[nt]
        if isinstance(precondition[0], BoolAbs):
            return [t for t, out in members
                    if all(v.may(o) for v, o in zip(precondition, out))]
        w = precondition[0].width
        m = (1 << w) - 1
        must0 = [~v.bits.ones & m for v in precondition]
        must1 = [v.bits.known_ones for v in precondition]
        slo = [v.s.lo for v in precondition]
        shi = [v.s.hi for v in precondition]
        ulo = [v.u.lo for v in precondition]
        uhi = [v.u.hi for v in precondition]
        hits = kernels.filter_members(self._flat[nt], self.m, must0, must1, slo, shi, ulo, uhi, w)
        return [members[k][0] for k in hits]

    def stats(self) -> dict:
        per = {nt: {size: len(v) for size, v in sorted(layers.items())}
               for nt, layers in self.layers.items()}
        kept = len(self)
        tried = sum(self.tried.values())
        return {"n": self.n, "components": kept, "candidates": tried,
                "dedup_ratio": (kept / tried) if tried else 1.0, "per_nonterminal": per}


def count_terms(grammar, nt: str, n: int) -> int:
    """Number of syntactically distinct complete terms of size exactly ``n`` derivable from ``nt``."""

    @lru_cache(maxsize=None)
    def count(a, size):
        total = 0
        for p in grammar.productions_for(a):
            if p.is_leaf:
                total += size == 1
                continue
            for sizes in compositions(size - 1, len(p.args)):
                total += math.prod(count(b, s) for b, s in zip(p.args, sizes))
        return total

    return count(nt, n)


def enumerate_terms(grammar, nt: str, n: int):
    """All complete terms of size exactly ``n`` from ``nt`` (no deduplication; tests only)."""

    @lru_cache(maxsize=None)
    def terms(a, size):
        out = []
        for p in grammar.productions_for(a):
            if p.is_leaf:
                if size == 1:
                    out.append(p.head)
                continue
            for sizes in compositions(size - 1, len(p.args)):
                for kids in itertools.product(*[terms(b, s) for b, s in zip(p.args, sizes)]):
                    out.append(p.instantiate(kids))
        return tuple(out)

    return list(terms(nt, n))

