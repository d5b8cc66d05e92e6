"""Bidirectional sketch-and-fill search with abstract-interpretation pruning.

Sketches (terms with holes) are generated top-down once.  Each outer
iteration grows the bottom-up component pool by one size and replays the
sketch worklist: complete candidates are tested, incomplete ones are
analyzed and dropped if some position becomes bottom, and otherwise one
hole is filled with every pool component that meets its precondition.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass, field

from .analyzer import analyze, forward_check
from .domains.product import concretize_if_small
from .enumerator import ComponentPool, DeadlineReached
from .semantics import satisfies
from .terms import Hole, holes, replace_at, subterm_at, to_sexpr


class NoHoles(ValueError):
    pass


@dataclass
class SearchConfig:
    max_height: int = 1
    max_size: int = None
    timeout: float = 600.0
    mode: str = "bidir"              # "bidir" or "topdown"
    pruning: str = "full"            # "full", "forward" or "off"
    concretize_limit: int = 64
    queue: str = "size"              # "size" (smallest first) or "fifo"
    sketches: list = None            # replaces the generated sketch set when given
    trace: bool = False

    def __post_init__(self):
        if self.max_height < 1:
            raise ValueError("max_height must be at least 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.mode not in ("bidir", "topdown"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.pruning not in ("full", "forward", "off"):
            raise ValueError(f"unknown pruning level {self.pruning!r}")
        if self.queue not in ("size", "fifo"):
            raise ValueError(f"unknown queue policy {self.queue!r}")


@dataclass
class SearchStats:
    dequeued: int = 0
    pruned: int = 0          # dropped because the analysis found bottom, or complete and wrong
    expanded: int = 0        # had a hole filled
    enqueued: int = 0        # filled candidates added to the worklist
    seeded: int = 0          # sketches placed on the worklist at the start of iterations
    analyses: int = 0
    analysis_time: float = 0.0
    wall_time: float = 0.0
    iterations: int = 0
    n: int = 0
    height: int = 0
    sketches: int = 0
    pool_sizes: list = field(default_factory=list)
    solution_size: int = None
    events: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "dequeued", "pruned", "expanded", "enqueued", "seeded", "analyses", "analysis_time",
            "wall_time", "iterations", "n", "height", "sketches", "pool_sizes", "solution_size")}
        d["pool_max_n"] = self.n
        d.update(self.extra)
        return d


@dataclass
class Outcome:
    stats: SearchStats
    kind = "outcome"


@dataclass
class Solution(Outcome):
    term: object = None
    kind = "solution"


@dataclass
class Unrealizable(Outcome):
    kind = "unrealizable"


@dataclass
class Timeout(Outcome):
    kind = "timeout"


def sketch_gen(grammar, d: int) -> list:
    """Sketches of height at most ``d`` built by applying at least one production from the start.

    Frontier positions are either holes or leaf productions.  The list is
    deduplicated and ordered by (size, generation order).
    """

    def gen(nt, h):
        sort = grammar.sort_of(nt)
        out = [Hole(nt, sort)]
        for p in grammar.productions_for(nt):
            if p.is_leaf:
                out.append(p.head)
            elif h >= 1:
                for kids in itertools.product(*[gen(a, h - 1) for a in p.args]):
                    out.append(p.instantiate(kids))
        return out

    seen = set()
    result = []
    for t in gen(grammar.start, d)[1:]:
        if t not in seen:
            seen.add(t)
            result.append(t)
    order = {t: k for k, t in enumerate(result)}
    result.sort(key=lambda t: (t.size, order[t]))
    return result


def _tuple_size(pre, limit):
    total = 1
    for v in pre:
        s = concretize_if_small(v, limit)
        if s is None:
            return None
        total *= len(s)
        if total > limit:
            return None
    return total


def pick_hole(P, analysis, limit: int = 64):
    """Hole with the smallest finite precondition; leftmost-outermost on ties or if none is finite."""
    hs = holes(P)
    if not hs:
        raise NoHoles("sketch has no holes")
    best, best_size = hs[0][0], None
    if analysis is None:
        return best
    for pos, _ in hs:
        size = _tuple_size(analysis.at(pos), limit)
        if size is not None and (best_size is None or size < best_size):
            best, best_size = pos, size
    return best


class _Worklist:
    def __init__(self, policy):
        self.policy = policy
        self.items = [] if policy == "size" else deque()
        self.seq = 0

    def push(self, t):
        if self.policy == "size":
            heapq.heappush(self.items, (t.size, self.seq, t))
        else:
            self.items.append(t)
        self.seq += 1

    def pop(self):
        if self.policy == "size":
            return heapq.heappop(self.items)[2]
        return self.items.popleft()

    def __len__(self):
        return len(self.items)


class _Expired(Exception):
    pass


def solve(problem, config: SearchConfig = None) -> Outcome:
    """Search for a grammar term that satisfies every example of ``problem``."""
    config = config or SearchConfig()
    clock = time.perf_counter
    start = clock()
    deadline = start + config.timeout
    stats = SearchStats()
    grammar = problem.grammar
    examples = problem.examples
    finite = grammar.is_finite()
    max_term = grammar.max_term_size() if finite else None
    pool = ComponentPool(grammar, [ex.inputs for ex in examples], config.concretize_limit)

    def finish(outcome):
        stats.wall_time = clock() - start
        stats.pool_sizes = list(pool.sizes_per_n)
        return outcome

    def leaf_values(node):
        return pool.outputs_of.get(node)

    def run_analysis(P):
        t0 = clock()
        stats.analyses += 1
        if config.pruning == "full":
            a = analyze(P, examples, collapse=True, leaf_values=leaf_values, stop_on_bottom=True)
        else:
            a = forward_check(P, examples, collapse=True, leaf_values=leaf_values)
        stats.analysis_time += clock() - t0
        return a

    height = config.max_height
    fixed = list(config.sketches) if config.sketches is not None else None
    Q = fixed
    try:
        while True:
            if config.mode == "topdown":
                if pool.n == 0:
                    pool.grow(1)
                if stats.iterations:
                    height += 1
                if fixed is None:
                    Q = sketch_gen(grammar, height)
            else:
                n = pool.n + 1
                if config.max_size is not None and n > config.max_size:
                    return finish(Timeout(stats))
                pool.grow(n, deadline, clock)
                if Q is None:
                    Q = sketch_gen(grammar, height)
            stats.iterations += 1
            stats.n, stats.height, stats.sketches = pool.n, height, len(Q)
            if config.trace:
                stats.events.append(("iteration", pool.n, height, len(Q)))
            found, all_pruned = _iterate(Q, pool, config, stats, run_analysis, examples,
                                         deadline, clock)
            if found is not None:
                stats.solution_size = found.size
                return finish(Solution(stats, found))
            if Q and all_pruned:
                return finish(Unrealizable(stats))
            if finite:
                bound = pool.n if config.mode == "bidir" else height
                if bound >= max_term:
                    return finish(Unrealizable(stats))
            if config.mode == "topdown" and config.max_size is not None and height >= config.max_size:
                return finish(Timeout(stats))
            if clock() > deadline:
                return finish(Timeout(stats))
    except (_Expired, DeadlineReached):
        return finish(Timeout(stats))


def _iterate(Q, pool, config, stats, run_analysis, examples, deadline, clock):
    work = _Worklist(config.queue)
    originals = set()
    seen = set()
    for t in Q:
        if t not in seen:
            seen.add(t)
            originals.add(t)
            work.push(t)
    stats.seeded += len(originals)
    feasible_original = False
    trace = stats.events if config.trace else None
    while work:
        if clock() > deadline:
            raise _Expired
        P = work.pop()
        stats.dequeued += 1
        if P.complete:
            if satisfies(P, examples):
                if trace is not None:
                    trace.append(("solution", to_sexpr(P)))
                return P, False
            stats.pruned += 1
            continue
        analysis = None
        if config.pruning != "off":
            analysis = run_analysis(P)
            if analysis.is_infeasible():
                stats.pruned += 1
                if trace is not None:
                    trace.append(("pruned", to_sexpr(P)))
                continue
        if P in originals:
            feasible_original = True
        stats.expanded += 1
        pos = pick_hole(P, analysis, config.concretize_limit)
        nt = subterm_at(P, pos).nonterminal
        if analysis is None:
            fillers = pool.components(nt)
        else:
            fillers = pool.components_satisfying(nt, analysis.at(pos), config.concretize_limit)
        if trace is not None:
            trace.append(("expand", to_sexpr(P), pos, len(fillers)))
        for c in fillers:
            P2 = replace_at(P, pos, c)
            if P2 not in seen:
                seen.add(P2)
                work.push(P2)
                stats.enqueued += 1
    return None, not feasible_original
