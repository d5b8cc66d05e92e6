"""Per-example forward/backward abstract interpretation of sketches.

For every example the analysis starts from a forward sweep, then alternates
backward (root to leaves) and forward (leaves to root) sweeps, each one
meeting into the running map, until two consecutive maps coincide.  Terms
are trees, so one sweep in the right order is a fixpoint of its pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domains.product import alpha_value, backward, bottom, forward, top
from .semantics import UnboundVariable, check_value, eval_term
from .terms import App, Const, Hole, Term, Var, format_position, iter_positions, width_of


class AnalysisDiverged(RuntimeError):
    """The alternation cap was reached; a transfer function is not monotone."""


class _Flat:
    """Preorder layout of a term.  With ``collapse`` complete subterms become leaves."""

    __slots__ = ("positions", "nodes", "children", "index", "max_width")

    def __init__(self, t: Term, collapse: bool = False):
        self.positions = []
        self.nodes = []
        self.children = []
        stack = [((), t)]
        while stack:
            p, s = stack.pop()
            k = len(self.nodes)
            self.positions.append(p)
            self.nodes.append(s)
            self.children.append([])
            if isinstance(s, App) and not (collapse and s.complete):
                for i in range(len(s.children), 0, -1):
                    stack.append((p + (i,), s.children[i - 1]))
        self.index = {p: k for k, p in enumerate(self.positions)}
        for k, p in enumerate(self.positions):
            if p:
                self.children[self.index[p[:-1]]].append(k)
        self.max_width = max(width_of(s.sort) for s in self.nodes)

    def is_inner(self, k) -> bool:
        return bool(self.children[k])


def _leaf_value(node, inputs, leaf_values):
    if isinstance(node, Hole):
        return top(node.sort)
    if isinstance(node, Const):
        return alpha_value(node.value, node.sort)
    if isinstance(node, Var):
        try:
            value = inputs[node.name]
        except KeyError:
            raise UnboundVariable(f"variable {node.name!r} is not bound") from None
        check_value(value, node.sort)
        return alpha_value(value, node.sort)
    # a complete subterm treated as a leaf
    if leaf_values is not None:
        cached = leaf_values(node)
        if cached is not None:
            return alpha_value(cached, node.sort)
    return alpha_value(eval_term(node, inputs), node.sort)


def _init(flat: _Flat, inputs, leaf_values=None):
    return [bottom(n.sort) if flat.is_inner(k) else _leaf_value(n, inputs, leaf_values)
            for k, n in enumerate(flat.nodes)]


def _forward(flat: _Flat, xs, meet: bool):
    xs = list(xs)
    for k in range(len(xs) - 1, -1, -1):
        kids = flat.children[k]
        if not kids:
            continue
        new = forward(flat.nodes[k].op, [xs[c] for c in kids])
        xs[k] = xs[k].meet(new) if meet else xs[k].join(new)
    return xs


def _backward(flat: _Flat, output, xs):
    xs = list(xs)
    xs[0] = xs[0].meet(alpha_value(output, flat.nodes[0].sort))
    for k in range(len(xs)):
        kids = flat.children[k]
        if not kids:
            continue
        op = flat.nodes[k].op
        for i, c in enumerate(kids, 1):
            xs[c] = xs[c].meet(backward(op, i, xs[k], [xs[j] for j in kids]))
    return xs


def _to_map(flat, xs):
    return dict(zip(flat.positions, xs))


def _from_map(flat, current):
    return [current[p] for p in flat.positions]


def forward_init(P: Term, inputs: dict) -> dict:
    """Initial forward map: inputs and constants abstracted, holes top, applications bottom."""
    flat = _Flat(P)
    return _to_map(flat, _init(flat, inputs))


def forward_pass(P: Term, current: dict, meet: bool = True) -> dict:
    """One children-first sweep.  ``meet=False`` joins instead (used from the initial map)."""
    flat = _Flat(P)
    return _to_map(flat, _forward(flat, _from_map(flat, current), meet))


def backward_pass(P: Term, output, current: dict) -> dict:
    """One root-first sweep pushing the desired output down to every position."""
    flat = _Flat(P)
    return _to_map(flat, _backward(flat, output, _from_map(flat, current)))


def _chain(flat, inputs, output, trace, leaf_values=None):
    xs = _forward(flat, _init(flat, inputs, leaf_values), meet=False)
    steps = [xs] if trace else None
    cap = 2 * flat.max_width * len(xs)
    for _ in range(cap):
        ys = _backward(flat, output, xs)
        if trace:
            steps.append(ys)
        if ys == xs:
            return xs, steps
        zs = _forward(flat, ys, meet=True)
        if trace:
            steps.append(zs)
        if zs == ys:
            return zs, steps
        xs = zs
    raise AnalysisDiverged(f"no convergence after {cap} alternations")


@dataclass
class AnalysisResult:
    positions: list
    per_example: list  # one list of values per example, aligned with positions
    traces: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {p: k for k, p in enumerate(self.positions)}

    def at(self, p) -> tuple:
        k = self._index[p]
        return tuple(xs[k] for xs in self.per_example)

    def as_dict(self) -> dict:
        return {p: self.at(p) for p in self.positions}

    def is_infeasible(self) -> bool:
        return any(v.is_bottom() for xs in self.per_example for v in xs)

    def trace_table(self, example: int = 0) -> list:
        """Rows ``(position, value_0, value_1, ...)`` of the recorded chain for one example."""
        steps = self.traces[example]
        return [(format_position(p), *[str(xs[k]) for xs in steps])
                for k, p in enumerate(self.positions)]


def analyze(P: Term, examples, *, trace: bool = False, collapse: bool = False,
            leaf_values=None, stop_on_bottom: bool = False) -> AnalysisResult:
    """Necessary preconditions for every position of ``P`` on each example.

    ``collapse`` treats complete subterms as single leaves; ``leaf_values``
    may then supply their concrete outputs as ``f(subterm) -> tuple``.
    With ``stop_on_bottom`` the remaining examples are skipped once one
    example yields bottom.
    """
    flat = _Flat(P, collapse)
    per_example, traces = [], []
    for j, ex in enumerate(examples):
        lv = None
        if leaf_values is not None:
            def lv(node, j=j):
                vec = leaf_values(node)
                return None if vec is None else vec[j]
        xs, steps = _chain(flat, ex.inputs, ex.output, trace, lv)
        per_example.append(xs)
        if trace:
            traces.append(steps)
        if stop_on_bottom and xs[0].is_bottom():
            break
    return AnalysisResult(flat.positions, per_example, traces)


def forward_check(P: Term, examples, *, collapse: bool = False, leaf_values=None) -> AnalysisResult:
    """Forward sweep plus the root consistency check only (no backward refinement)."""
    flat = _Flat(P, collapse)
    per_example = []
    for j, ex in enumerate(examples):
        lv = None
        if leaf_values is not None:
            def lv(node, j=j):
                vec = leaf_values(node)
                return None if vec is None else vec[j]
        xs = _forward(flat, _init(flat, ex.inputs, lv), meet=False)
        xs[0] = xs[0].meet(alpha_value(ex.output, flat.nodes[0].sort))
        per_example.append(xs)
        if xs[0].is_bottom():
            break
    return AnalysisResult(flat.positions, per_example)


def positions_of(P: Term) -> list:
    return [p for p, _ in iter_positions(P)]
